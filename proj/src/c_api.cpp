#include "toalift/toalift.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "toalift/bench.hpp"
#include "toalift/errors.hpp"
#include "toalift/json_io.hpp"
#include "toalift/stationarity.hpp"

struct toa_scenario {
  toalift::Scenario scenario;
};

struct toa_result {
  toalift::ObjectiveKind kind;
  toalift::Scenario scenario;
  toalift::OptimizationResult result;
};

struct toa_campaign {
  toalift::CampaignResult result;
};

struct toa_basin {
  toalift::BasinSweep sweep;
};

namespace {

using namespace toalift;

thread_local std::string g_last_error;

toa_status fail(toa_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class Fn>
toa_status guarded(Fn&& fn) {
  try {
    fn();
    return TOA_OK;
  } catch (const ContractViolation& e) {
    return fail(TOA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const NonDifferentiablePoint& e) {
    return fail(TOA_ERR_NON_DIFFERENTIABLE, e.what());
  } catch (const GenerationFailure& e) {
    return fail(TOA_ERR_GENERATION, e.what());
  } catch (const ConfigError& e) {
    return fail(TOA_ERR_CONFIG, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(TOA_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(TOA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TOA_ERR_INTERNAL, "unknown error");
  }
}

void not_null(const void* p, const char* what) {
  if (p == nullptr) throw ContractViolation(std::string(what) + " must not be null");
}

ObjectiveKind to_kind(toa_objective k) {
  switch (k) {
    case TOA_F1: return ObjectiveKind::F1;
    case TOA_F2: return ObjectiveKind::F2;
    case TOA_FL1: return ObjectiveKind::FL1;
    case TOA_FL2: return ObjectiveKind::FL2;
  }
  throw ContractViolation("unknown objective kind");
}

toa_objective from_kind(ObjectiveKind k) { return static_cast<toa_objective>(static_cast<int>(k)); }

ParameterVector to_params(const toa_scenario* s, toa_objective kind, const double* params, size_t n) {
  not_null(s, "scenario");
  not_null(params, "params");
  const auto dim = static_cast<size_t>(s->scenario.dim());
  const bool lifted_kind = is_lifted(to_kind(kind));
  if (n != dim + (lifted_kind ? 1 : 0))
    throw ContractViolation("expected " + std::to_string(dim + (lifted_kind ? 1 : 0)) + " parameters for " +
                            std::string(to_string(to_kind(kind))) + ", got " + std::to_string(n));
  const Eigen::Map<const Eigen::VectorXd> flat(params, static_cast<Eigen::Index>(n));
  return ParameterVector::from_flat(flat, lifted_kind);
}

void copy_out(const Eigen::VectorXd& v, double* out, size_t capacity) {
  not_null(out, "output buffer");
  if (capacity < static_cast<size_t>(v.size()))
    throw ContractViolation("output buffer holds " + std::to_string(capacity) + " values, need " +
                            std::to_string(v.size()));
  std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

GeneratorConfig to_generator(const toa_generator_config& c) {
  GeneratorConfig g;
  g.dim = c.dim;
  g.n_stations = c.n_stations;
  g.cube_side = c.cube_side;
  g.min_normalized_sv = c.min_normalized_sv;
  g.gate_measure = c.gate_measure == TOA_GATE_COVARIANCE ? CollinearityMeasure::CovarianceSpectrum
                                                         : CollinearityMeasure::CoordinateSpread;
  g.seed = c.seed;
  return g;
}

void from_generator(const GeneratorConfig& g, toa_generator_config* c) {
  c->dim = g.dim;
  c->n_stations = g.n_stations;
  c->cube_side = g.cube_side;
  c->min_normalized_sv = g.min_normalized_sv;
  c->gate_measure = g.gate_measure == CollinearityMeasure::CovarianceSpectrum ? TOA_GATE_COVARIANCE : TOA_GATE_SPREAD;
  c->seed = g.seed;
}

SolverSettings to_settings(const toa_solver_settings* c) {
  if (c == nullptr) return SolverSettings{};
  SolverSettings s;
  s.max_iterations = c->max_iterations;
  s.max_function_evals = c->max_function_evals;
  s.f_tol = c->f_tol;
  s.x_tol = c->x_tol;
  s.optimality_tol = c->optimality_tol;
  s.initial_damping = c->initial_damping;
  s.damping_scale = c->damping_scale == TOA_DAMPING_JACOBIAN ? DampingScale::JacobianDiagonal : DampingScale::Identity;
  s.record_trace = c->record_trace != 0;
  return s;
}

void from_settings(const SolverSettings& s, toa_solver_settings* c) {
  c->max_iterations = s.max_iterations;
  c->max_function_evals = s.max_function_evals;
  c->f_tol = s.f_tol;
  c->x_tol = s.x_tol;
  c->optimality_tol = s.optimality_tol;
  c->initial_damping = s.initial_damping;
  c->damping_scale = s.damping_scale == DampingScale::JacobianDiagonal ? TOA_DAMPING_JACOBIAN : TOA_DAMPING_IDENTITY;
  c->record_trace = s.record_trace ? 1 : 0;
}

std::ofstream open_out(const char* path) {
  not_null(path, "path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure(std::string("cannot open '") + path + "' for writing");
  return out;
}

void finish_write(std::ofstream& out, const char* path) {
  out.flush();
  if (!out) throw std::ios_base::failure(std::string("write to '") + path + "' failed");
}

}  // namespace

extern "C" {

const char* toa_version(void) { return "1.0.0"; }

const char* toa_last_error(void) { return g_last_error.c_str(); }

const char* toa_status_string(toa_status status) {
  switch (status) {
    case TOA_OK: return "ok";
    case TOA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TOA_ERR_NON_DIFFERENTIABLE: return "non-differentiable point";
    case TOA_ERR_GENERATION: return "generation failure";
    case TOA_ERR_CONFIG: return "configuration error";
    case TOA_ERR_IO: return "i/o error";
    case TOA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* toa_objective_name(toa_objective kind) {
  switch (kind) {
    case TOA_F1: return "F1";
    case TOA_F2: return "F2";
    case TOA_FL1: return "FL1";
    case TOA_FL2: return "FL2";
  }
  return "?";
}

toa_status toa_objective_parse(const char* name, toa_objective* out) {
  return guarded([&] {
    not_null(name, "name");
    not_null(out, "out");
    *out = from_kind(parse_objective_kind(name));
  });
}

void toa_string_free(char* s) { std::free(s); }

void toa_generator_config_default(toa_generator_config* cfg) {
  if (cfg != nullptr) from_generator(GeneratorConfig{}, cfg);
}

toa_status toa_scenario_create(const double* stations, size_t n_stations, size_t dim, const double* ground_truth,
                               toa_scenario** out) {
  return guarded([&] {
    not_null(stations, "stations");
    not_null(ground_truth, "ground_truth");
    not_null(out, "out");
    const auto rows = static_cast<Eigen::Index>(n_stations);
    const auto cols = static_cast<Eigen::Index>(dim);
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::MatrixXd m = Eigen::Map<const RowMajor>(stations, rows, cols);
    Position gt = Eigen::Map<const Eigen::VectorXd>(ground_truth, cols);
    *out = new toa_scenario{Scenario(Constellation(std::move(m)), std::move(gt))};
  });
}

toa_status toa_scenario_from_json(const char* json, toa_scenario** out) {
  return guarded([&] {
    not_null(json, "json");
    not_null(out, "out");
    *out = new toa_scenario{scenario_from_json(json)};
  });
}

toa_status toa_scenario_load(const char* path, toa_scenario** out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    *out = new toa_scenario{scenario_from_json(read_text_file(path))};
  });
}

toa_status toa_scenario_random(const toa_generator_config* cfg, toa_scenario** out) {
  return guarded([&] {
    not_null(cfg, "config");
    not_null(out, "out");
    *out = new toa_scenario{random_scenario(to_generator(*cfg))};
  });
}

toa_status toa_random_position(const toa_generator_config* cfg, double* out, size_t capacity) {
  return guarded([&] {
    not_null(cfg, "config");
    const auto g = to_generator(*cfg);
    g.validate();
    Rng rng(g.seed);
    copy_out(random_position(g, rng), out, capacity);
  });
}

toa_status toa_scenario_planted(double x_g, int s1, int s2, const double* b_values, toa_scenario** out) {
  return guarded([&] {
    not_null(out, "out");
    if (s2 > 0) not_null(b_values, "b_values");
    PlantedExampleConfig cfg{x_g, s1, s2, std::vector<double>(b_values, b_values + std::max(s2, 0))};
    *out = new toa_scenario{planted_example(cfg)};
  });
}

toa_status toa_scenario_planted_load(const char* path, toa_scenario** out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    *out = new toa_scenario{planted_example(planted_config_from_json(read_text_file(path)))};
  });
}

toa_status toa_scenario_to_json(const toa_scenario* s, char** out) {
  return guarded([&] {
    not_null(s, "scenario");
    not_null(out, "out");
    *out = dup_string(scenario_to_json(s->scenario));
  });
}

size_t toa_scenario_dim(const toa_scenario* s) { return s ? static_cast<size_t>(s->scenario.dim()) : 0; }

size_t toa_scenario_size(const toa_scenario* s) { return s ? s->scenario.size() : 0; }

toa_status toa_scenario_distances(const toa_scenario* s, double* out, size_t capacity) {
  return guarded([&] {
    not_null(s, "scenario");
    copy_out(s->scenario.distances(), out, capacity);
  });
}

toa_status toa_scenario_ground_truth(const toa_scenario* s, double* out, size_t capacity) {
  return guarded([&] {
    not_null(s, "scenario");
    copy_out(s->scenario.ground_truth(), out, capacity);
  });
}

void toa_scenario_destroy(toa_scenario* s) { delete s; }

toa_status toa_evaluate(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                        double* value) {
  return guarded([&] {
    not_null(value, "value");
    const auto p = to_params(s, kind, params, n_params);
    *value = evaluate(to_kind(kind), s->scenario, p);
  });
}

toa_status toa_gradient(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                        double* grad) {
  return guarded([&] {
    const auto p = to_params(s, kind, params, n_params);
    copy_out(gradient(to_kind(kind), s->scenario, p), grad, n_params);
  });
}

toa_status toa_hessian(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                       double* hess) {
  return guarded([&] {
    const auto p = to_params(s, kind, params, n_params);
    const Eigen::MatrixXd h = hessian(to_kind(kind), s->scenario, p);  // symmetric: layout-agnostic
    copy_out(Eigen::Map<const Eigen::VectorXd>(h.data(), h.size()), hess, n_params * n_params);
  });
}

void toa_solver_settings_default(toa_solver_settings* settings) {
  if (settings != nullptr) from_settings(SolverSettings{}, settings);
}

toa_status toa_solver_settings_load(const char* path, toa_solver_settings* out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    from_settings(solver_settings_from_json(read_text_file(path)), out);
  });
}

toa_status toa_solve(const toa_scenario* s, toa_objective kind, const double* x0, size_t n_params,
                     const toa_solver_settings* settings, toa_result** out) {
  return guarded([&] {
    not_null(out, "out");
    const auto p = to_params(s, kind, x0, n_params);
    auto res = solve(to_kind(kind), s->scenario, p, to_settings(settings));
    *out = new toa_result{to_kind(kind), s->scenario, std::move(res)};
  });
}

size_t toa_result_size(const toa_result* r) { return r ? static_cast<size_t>(r->result.final_point.size()) : 0; }

toa_status toa_result_final_point(const toa_result* r, double* out, size_t capacity) {
  return guarded([&] {
    not_null(r, "result");
    copy_out(r->result.final_point.flat(), out, capacity);
  });
}

double toa_result_final_value(const toa_result* r) { return r ? r->result.final_value : 0.0; }

double toa_result_error(const toa_result* r) {
  return r ? (r->result.final_point.position - r->scenario.ground_truth()).norm() : 0.0;
}

int toa_result_iterations(const toa_result* r) { return r ? r->result.iterations : 0; }

toa_termination toa_result_termination(const toa_result* r) {
  return r ? static_cast<toa_termination>(static_cast<int>(r->result.termination)) : TOA_TERM_MAX_ITER;
}

size_t toa_result_trace_length(const toa_result* r) { return r ? r->result.trace.size() : 0; }

toa_status toa_result_trace_point(const toa_result* r, size_t step, double* out, size_t capacity) {
  return guarded([&] {
    not_null(r, "result");
    if (step >= r->result.trace.size()) throw ContractViolation("trace step out of range");
    copy_out(r->result.trace[step].flat(), out, capacity);
  });
}

toa_status toa_result_to_json(const toa_result* r, char** out) {
  return guarded([&] {
    not_null(r, "result");
    not_null(out, "out");
    *out = dup_string(result_to_json(r->kind, r->scenario, r->result));
  });
}

toa_status toa_result_write_trace_csv(const toa_result* r, const char* path) {
  return guarded([&] {
    not_null(r, "result");
    auto out = open_out(path);
    write_trace_csv(out, r->kind, r->scenario, r->result);
    finish_write(out, path);
  });
}

void toa_result_destroy(toa_result* r) { delete r; }

toa_status toa_classify(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                        double grad_tol, double curv_tol, toa_class* out_class, char** out_json) {
  return guarded([&] {
    const auto p = to_params(s, kind, params, n_params);
    const auto rep = classify(to_kind(kind), s->scenario, p,
                              grad_tol > 0.0 ? std::optional<double>(grad_tol) : std::nullopt,
                              curv_tol >= 0.0 ? curv_tol : kDefaultCurvatureTol);
    if (out_class != nullptr) *out_class = static_cast<toa_class>(static_cast<int>(rep.classification));
    if (out_json != nullptr) *out_json = dup_string(report_to_json(to_kind(kind), rep));
  });
}

void toa_campaign_config_default(toa_campaign_config* cfg) {
  if (cfg == nullptr) return;
  const CampaignConfig c;
  from_generator(c.generator, &cfg->generator);
  cfg->trials = c.trials;
  cfg->kinds_mask = TOA_KIND_ALL;
  cfg->threads = c.threads;
  cfg->audit_saddles = c.audit_saddles ? 1 : 0;
  from_settings(c.settings, &cfg->solver);
}

toa_status toa_campaign_config_load(const char* path, toa_campaign_config* out) {
  return guarded([&] {
    not_null(path, "path");
    not_null(out, "out");
    const auto c = campaign_config_from_json(read_text_file(path));
    from_generator(c.generator, &out->generator);
    out->trials = c.trials;
    out->kinds_mask = 0;
    for (auto k : c.kinds) out->kinds_mask |= 1u << static_cast<int>(k);
    out->threads = c.threads;
    out->audit_saddles = c.audit_saddles ? 1 : 0;
    from_settings(c.settings, &out->solver);
  });
}

toa_status toa_campaign_run(const toa_campaign_config* cfg, toa_campaign** out) {
  return guarded([&] {
    not_null(cfg, "config");
    not_null(out, "out");
    CampaignConfig c;
    c.generator = to_generator(cfg->generator);
    c.trials = cfg->trials;
    c.threads = cfg->threads;
    c.audit_saddles = cfg->audit_saddles != 0;
    c.settings = to_settings(&cfg->solver);
    c.settings.record_trace = false;
    c.kinds.clear();
    for (int k = 0; k < 4; ++k)
      if (cfg->kinds_mask & (1u << k)) c.kinds.push_back(static_cast<ObjectiveKind>(k));
    *out = new toa_campaign{run_campaign(c)};
  });
}

size_t toa_campaign_row_count(const toa_campaign* c) { return c ? c->result.rows.size() : 0; }

toa_status toa_campaign_row(const toa_campaign* c, size_t index, toa_benchmark_row* out) {
  return guarded([&] {
    not_null(c, "campaign");
    not_null(out, "out");
    if (index >= c->result.rows.size()) throw ContractViolation("row index out of range");
    const auto& r = c->result.rows[index];
    *out = toa_benchmark_row{r.n_stations,    from_kind(r.kind), r.mean_error,  r.std_error,
                             r.failure_count, r.trial_count,     r.solver_errors};
  });
}

toa_status toa_campaign_audit(const toa_campaign* c, toa_objective kind, toa_saddle_audit* out) {
  return guarded([&] {
    not_null(c, "campaign");
    not_null(out, "out");
    const auto k = to_kind(kind);
    if (is_lifted(k)) throw ContractViolation("audits are keyed by the unlifted kind (F1 or F2)");
    *out = toa_saddle_audit{0, 0, 0, 0};
    const auto it = c->result.audits.find(k);
    if (it == c->result.audits.end()) return;
    const auto& a = it->second;
    *out = toa_saddle_audit{a.failures, a.verified_minima, a.saddles, static_cast<int>(a.counterexamples.size())};
  });
}

toa_status toa_campaign_write_csv(const toa_campaign* c, const char* rows_path, const char* trials_path) {
  return guarded([&] {
    not_null(c, "campaign");
    auto rows = open_out(rows_path);
    write_rows_csv(rows, c->result.rows);
    finish_write(rows, rows_path);
    auto trials = open_out(trials_path);
    write_trials_csv(trials, c->result.trials);
    finish_write(trials, trials_path);
  });
}

void toa_campaign_destroy(toa_campaign* c) { delete c; }

toa_status toa_basin_sweep(const toa_scenario* s, toa_objective kind, const toa_basin_grid* grid,
                           const double* local_minima, size_t n_local_minima, double lambda0,
                           const toa_solver_settings* settings, toa_basin** out) {
  return guarded([&] {
    not_null(s, "scenario");
    not_null(grid, "grid");
    not_null(out, "out");
    if (n_local_minima > 0) not_null(local_minima, "local_minima");
    std::vector<Position> minima;
    for (size_t k = 0; k < n_local_minima; ++k) {
      Position m(2);
      m << local_minima[2 * k], local_minima[2 * k + 1];
      minima.push_back(std::move(m));
    }
    const BasinGrid g{grid->x_min, grid->x_max, grid->y_min, grid->y_max, grid->step};
    auto solver = to_settings(settings);
    solver.record_trace = false;
    *out = new toa_basin{basin_sweep(s->scenario, to_kind(kind), g, minima, solver, lambda0)};
  });
}

size_t toa_basin_nx(const toa_basin* b) { return b ? static_cast<size_t>(b->sweep.grid.nx()) : 0; }

size_t toa_basin_ny(const toa_basin* b) { return b ? static_cast<size_t>(b->sweep.grid.ny()) : 0; }

toa_basin_label toa_basin_label_at(const toa_basin* b, size_t ix, size_t iy) {
  if (b == nullptr || ix >= toa_basin_nx(b) || iy >= toa_basin_ny(b)) return TOA_BASIN_DIVERGED;
  return static_cast<toa_basin_label>(static_cast<int>(b->sweep.at(static_cast<int>(ix), static_cast<int>(iy))));
}

toa_status toa_basin_write_csv(const toa_basin* b, const char* path) {
  return guarded([&] {
    not_null(b, "basin");
    auto out = open_out(path);
    write_basin_csv(out, b->sweep);
    finish_write(out, path);
  });
}

void toa_basin_destroy(toa_basin* b) { delete b; }

}  // extern "C"
