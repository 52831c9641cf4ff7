#include "toalift/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "toalift/errors.hpp"

namespace toalift {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
}

json vec_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vec_from(const json& j, std::string_view what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json point_json(const ParameterVector& p) {
  json j{{"position", vec_json(p.position)}};
  j["lambda"] = p.lambda ? json(*p.lambda) : json(nullptr);
  return j;
}

SolverSettings solver_from(const json& j) {
  reject_unknown(j,
                 {"max_iterations", "max_function_evals", "f_tol", "x_tol", "optimality_tol", "initial_damping",
                  "damping_scale"},
                 "solver settings");
  SolverSettings s;
  s.max_iterations = field(j, "max_iterations", s.max_iterations);
  s.max_function_evals = field(j, "max_function_evals", s.max_function_evals);
  s.f_tol = field(j, "f_tol", s.f_tol);
  s.x_tol = field(j, "x_tol", s.x_tol);
  s.optimality_tol = field(j, "optimality_tol", s.optimality_tol);
  s.initial_damping = field(j, "initial_damping", s.initial_damping);
  const auto scale = field<std::string>(j, "damping_scale", "identity");
  if (scale == "identity")
    s.damping_scale = DampingScale::Identity;
  else if (scale == "jacobian")
    s.damping_scale = DampingScale::JacobianDiagonal;
  else
    throw ConfigError("damping_scale must be 'identity' or 'jacobian'");
  try {
    s.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return s;
}

GeneratorConfig generator_from(const json& j) {
  GeneratorConfig g;
  g.dim = field(j, "dim", g.dim);
  g.n_stations = field(j, "n_stations", g.n_stations);
  g.cube_side = field(j, "cube_side", g.cube_side);
  g.min_normalized_sv = field(j, "min_normalized_sv", g.min_normalized_sv);
  g.seed = field<std::uint64_t>(j, "seed", g.seed);
  const auto measure = field<std::string>(j, "gate_measure", "spread");
  if (measure == "spread")
    g.gate_measure = CollinearityMeasure::CoordinateSpread;
  else if (measure == "covariance")
    g.gate_measure = CollinearityMeasure::CovarianceSpectrum;
  else
    throw ConfigError("gate_measure must be 'spread' or 'covariance'");
  try {
    g.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return g;
}

const std::set<std::string> kGeneratorKeys{"dim", "n_stations", "cube_side", "min_normalized_sv", "gate_measure",
                                           "seed"};

}  // namespace

std::string scenario_to_json(const Scenario& scenario) {
  json stations = json::array();
  const auto& a = scenario.constellation().matrix();
  for (Eigen::Index i = 0; i < a.rows(); ++i) stations.push_back(vec_json(a.row(i).transpose()));
  return json{{"stations", stations}, {"ground_truth", vec_json(scenario.ground_truth())}}.dump(2);
}

Scenario scenario_from_json(std::string_view text) {
  const json j = parse(text);
  reject_unknown(j, {"stations", "ground_truth", "distances"}, "scenario");
  if (!j.contains("stations") || !j.contains("ground_truth"))
    throw ConfigError("scenario needs 'stations' and 'ground_truth'");
  const json& st = j.at("stations");
  if (!st.is_array() || st.empty()) throw ConfigError("'stations' must be a non-empty array");
  std::vector<std::vector<double>> rows;
  for (const auto& row : st) {
    const auto v = vec_from(row, "each station");
    rows.emplace_back(v.data(), v.data() + v.size());
  }
  try {
    return Scenario(Constellation::from_rows(rows), vec_from(j.at("ground_truth"), "'ground_truth'"));
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("inconsistent scenario: ") + e.what());
  }
}

GeneratorConfig generator_config_from_json(std::string_view text) {
  const json j = parse(text);
  reject_unknown(j, kGeneratorKeys, "generator config");
  return generator_from(j);
}

CampaignConfig campaign_config_from_json(std::string_view text) {
  const json j = parse(text);
  auto known = kGeneratorKeys;
  known.insert({"trials", "kinds", "threads", "audit_saddles", "solver"});
  reject_unknown(j, known, "campaign config");

  CampaignConfig c;
  json gen = json::object();
  for (const auto& key : kGeneratorKeys)
    if (j.contains(key)) gen[key] = j.at(key);
  c.generator = generator_from(gen);
  c.trials = field(j, "trials", c.trials);
  c.threads = field(j, "threads", c.threads);
  c.audit_saddles = field(j, "audit_saddles", c.audit_saddles);
  if (j.contains("kinds")) {
    c.kinds.clear();
    for (const auto& name : field<std::vector<std::string>>(j, "kinds", {})) c.kinds.push_back(parse_objective_kind(name));
  }
  if (j.contains("solver")) c.settings = solver_from(j.at("solver"));
  try {
    c.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SolverSettings solver_settings_from_json(std::string_view text) { return solver_from(parse(text)); }

PlantedExampleConfig planted_config_from_json(std::string_view text) {
  const json j = parse(text);
  reject_unknown(j, {"x_g", "s1", "s2", "b_values"}, "planted example config");
  PlantedExampleConfig c;
  c.x_g = field(j, "x_g", c.x_g);
  c.s1 = field(j, "s1", c.s1);
  c.s2 = field(j, "s2", c.s2);
  c.b_values = field(j, "b_values", c.b_values);
  return c;
}

std::string result_to_json(ObjectiveKind kind, const Scenario& scenario, const OptimizationResult& result) {
  json j{{"kind", std::string(to_string(kind))},
         {"final_point", point_json(result.final_point)},
         {"final_value", result.final_value},
         {"iterations", result.iterations},
         {"function_evals", result.function_evals},
         {"termination", std::string(to_string(result.termination))},
         {"error", (result.final_point.position - scenario.ground_truth()).norm()}};
  if (!result.trace.empty()) {
    json trace = json::array();
    for (const auto& p : result.trace) trace.push_back(point_json(p));
    j["trace"] = trace;
  }
  return j.dump(2);
}

std::string report_to_json(ObjectiveKind kind, const StationaryReport& report) {
  return json{{"kind", std::string(to_string(kind))},
              {"point", point_json(report.point)},
              {"value", report.value},
              {"gradient", vec_json(report.gradient)},
              {"gradient_norm", report.gradient_norm},
              {"hessian_eigenvalues", vec_json(report.hessian_eigenvalues)},
              {"classification", std::string(to_string(report.classification))},
              {"grad_tol", report.grad_tol},
              {"curv_tol", report.curv_tol}}
      .dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace toalift
