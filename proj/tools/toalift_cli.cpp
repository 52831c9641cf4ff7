// toalift command-line front end. Talks to the library only through the C API.

#include <toalift/toalift.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheckFailed = 2;

struct ApiError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(toa_status st, const std::string& what) {
  if (st != TOA_OK) throw ApiError(what + ": " + toa_status_string(st) + ": " + toa_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ScenarioPtr = std::unique_ptr<toa_scenario, Deleter<toa_scenario, toa_scenario_destroy>>;
using ResultPtr = std::unique_ptr<toa_result, Deleter<toa_result, toa_result_destroy>>;
using CampaignPtr = std::unique_ptr<toa_campaign, Deleter<toa_campaign, toa_campaign_destroy>>;
using BasinPtr = std::unique_ptr<toa_basin, Deleter<toa_basin, toa_basin_destroy>>;
using StringPtr = std::unique_ptr<char, Deleter<char, toa_string_free>>;

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ApiError(what + ": '" + text + "' is not a comma-separated list of numbers");
    }
  }
  return out;
}

toa_objective parse_kind(const std::string& name) {
  toa_objective k{};
  check(toa_objective_parse(name.c_str(), &k), "--kind");
  return k;
}

bool lifted(toa_objective k) { return k == TOA_FL1 || k == TOA_FL2; }

ScenarioPtr load_scenario(const std::string& path) {
  toa_scenario* s = nullptr;
  check(toa_scenario_load(path.c_str(), &s), "loading scenario '" + path + "'");
  return ScenarioPtr(s);
}

ScenarioPtr canonical_example() {
  const double b[] = {-2.0, 1.0, 3.0};
  toa_scenario* s = nullptr;
  check(toa_scenario_planted(1.0, 1, 3, b, &s), "building the planted example");
  return ScenarioPtr(s);
}

std::string take(char* raw) {
  StringPtr owned(raw);
  return owned ? std::string(owned.get()) : std::string();
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ApiError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool json = false;
};

toa_solver_settings solver_settings(const std::string& path) {
  toa_solver_settings s;
  if (path.empty())
    toa_solver_settings_default(&s);
  else
    check(toa_solver_settings_load(path.c_str(), &s), "loading solver settings");
  return s;
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  std::string scenario;
  std::string kind = "FL2";
  std::string start;
  double lambda0 = 1.0;
  std::string settings;
  bool trace = false;
};

int run_solve(const Globals& g, const SolveArgs& a) {
  auto scenario = load_scenario(a.scenario);
  const auto kind = parse_kind(a.kind);
  const auto dim = toa_scenario_dim(scenario.get());

  std::vector<double> x0;
  if (!a.start.empty()) {
    x0 = parse_reals(a.start, "--start");
    if (x0.size() != dim) throw ApiError("--start needs " + std::to_string(dim) + " coordinates");
  } else {
    toa_generator_config gen;
    toa_generator_config_default(&gen);
    gen.dim = static_cast<int>(dim);
    gen.n_stations = std::max<int>(gen.n_stations, static_cast<int>(dim) + 1);
    gen.seed = g.seed.value_or(gen.seed);
    x0.resize(dim);
    check(toa_random_position(&gen, x0.data(), x0.size()), "drawing a start point");
  }
  if (lifted(kind)) x0.push_back(a.lambda0);

  auto settings = solver_settings(a.settings);
  settings.record_trace = a.trace ? 1 : 0;
  toa_result* raw = nullptr;
  check(toa_solve(scenario.get(), kind, x0.data(), x0.size(), &settings, &raw), "solve");
  ResultPtr result(raw);

  char* json = nullptr;
  check(toa_result_to_json(result.get(), &json), "serializing the result");
  std::cout << take(json) << '\n';
  if (a.trace) {
    const auto path = ensure_dir(g.out_dir) / (std::string("solve_") + toa_objective_name(kind) + "_trace.csv");
    check(toa_result_write_trace_csv(result.get(), path.c_str()), "writing the trace");
  }
  return kExitOk;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string config;
  int trials = 0;
  int threads = 0;
  std::vector<std::string> kinds;
  bool check = false;
};

int run_bench(const Globals& g, const BenchArgs& a) {
  toa_campaign_config cfg;
  if (a.config.empty())
    toa_campaign_config_default(&cfg);
  else
    check(toa_campaign_config_load(a.config.c_str(), &cfg), "loading campaign config");
  if (g.seed) cfg.generator.seed = *g.seed;
  if (a.trials > 0) cfg.trials = a.trials;
  if (a.threads > 0) cfg.threads = a.threads;
  if (!a.kinds.empty()) {
    cfg.kinds_mask = 0;
    for (const auto& k : a.kinds) cfg.kinds_mask |= 1u << parse_kind(k);
  }

  toa_campaign* raw = nullptr;
  check(toa_campaign_run(&cfg, &raw), "campaign");
  CampaignPtr campaign(raw);

  const auto dir = ensure_dir(g.out_dir);
  const auto rows_path = dir / "rows.csv";
  const auto trials_path = dir / "trials.csv";
  check(toa_campaign_write_csv(campaign.get(), rows_path.c_str(), trials_path.c_str()), "writing CSVs");

  bool ok = true;
  std::ostringstream report;
  const auto n_rows = toa_campaign_row_count(campaign.get());
  if (g.json) report << "{\"rows\": [";
  for (std::size_t i = 0; i < n_rows; ++i) {
    toa_benchmark_row row;
    check(toa_campaign_row(campaign.get(), i, &row), "reading rows");
    if (lifted(row.kind) && row.failure_count != 0) ok = false;
    if (g.json) {
      report << (i ? ", " : "") << "{\"n\": " << row.n_stations << ", \"kind\": \"" << toa_objective_name(row.kind)
             << "\", \"mean\": " << row.mean_error << ", \"std\": " << row.std_error
             << ", \"failures\": " << row.failure_count << ", \"trials\": " << row.trial_count << "}";
    } else {
      char line[160];
      std::snprintf(line, sizeof line, "N=%d %-4s mean=%.4f std=%.4f failures=%d/%d\n", row.n_stations,
                    toa_objective_name(row.kind), row.mean_error, row.std_error, row.failure_count,
                    row.trial_count);
      report << line;
    }
  }
  if (g.json) report << "], \"audits\": {";
  bool first = true;
  for (auto kind : {TOA_F1, TOA_F2}) {
    toa_saddle_audit audit;
    check(toa_campaign_audit(campaign.get(), kind, &audit), "reading audits");
    // F1 counterexamples are reported, not checked.
    if (kind == TOA_F2 && audit.counterexamples != 0) ok = false;
    if (g.json) {
      report << (first ? "" : ", ") << '"' << toa_objective_name(kind) << "\": {\"failures\": " << audit.failures
             << ", \"verified_minima\": " << audit.verified_minima << ", \"saddles\": " << audit.saddles
             << ", \"counterexamples\": " << audit.counterexamples << "}";
      first = false;
    } else if (audit.failures > 0) {
      report << "audit " << toa_objective_name(kind) << ": " << audit.saddles << "/" << audit.verified_minima
             << " verified minima are saddles of the lifted objective (" << audit.counterexamples
             << " counterexamples)\n";
    }
  }
  if (g.json) report << "}, \"check\": " << (ok ? "true" : "false") << "}";
  std::cout << report.str() << (g.json ? "\n" : "");
  if (a.check && !ok) {
    std::cerr << "bench --check: lifted objectives converged to a wrong basin or a proven saddle was missing\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ---- example2d -----------------------------------------------------------

struct Example2dArgs {
  std::string planted;
  std::string settings;
};

int run_example2d(const Globals& g, const Example2dArgs& a) {
  ScenarioPtr scenario;
  if (a.planted.empty()) {
    scenario = canonical_example();
  } else {
    toa_scenario* raw = nullptr;
    check(toa_scenario_planted_load(a.planted.c_str(), &raw), "loading planted example config");
    scenario.reset(raw);
  }
  auto settings = solver_settings(a.settings);
  settings.record_trace = 1;

  const auto dir = ensure_dir(g.out_dir);
  std::ostringstream report;
  if (g.json) report << "{";
  bool first = true;
  for (auto kind : {TOA_F2, TOA_FL2}) {
    std::vector<double> x0{-1.0, 2.0};
    if (lifted(kind)) x0.push_back(1.0);
    toa_result* raw = nullptr;
    check(toa_solve(scenario.get(), kind, x0.data(), x0.size(), &settings, &raw), "solve");
    ResultPtr result(raw);
    const auto path = dir / (std::string("example2d_") + toa_objective_name(kind) + "_trace.csv");
    check(toa_result_write_trace_csv(result.get(), path.c_str()), "writing the trace");

    std::vector<double> fin(toa_result_size(result.get()));
    check(toa_result_final_point(result.get(), fin.data(), fin.size()), "reading the final point");
    if (g.json) {
      char* json = nullptr;
      check(toa_result_to_json(result.get(), &json), "serializing the result");
      report << (first ? "" : ", ") << '"' << toa_objective_name(kind) << "\": " << take(json);
      first = false;
    } else {
      char line[200];
      std::snprintf(line, sizeof line, "%-3s from (-1, 2%s) -> (%.6f, %.6f), error %.3g, %d iterations -> %s\n",
                    toa_objective_name(kind), lifted(kind) ? ", lambda 1" : "", fin[0], fin[1],
                    toa_result_error(result.get()), toa_result_iterations(result.get()), path.c_str());
      report << line;
    }
  }
  if (g.json) report << "}\n";
  std::cout << report.str();
  return kExitOk;
}

// ---- classify ------------------------------------------------------------

struct ClassifyArgs {
  std::string scenario;
  std::string kind = "FL2";
  std::string point;
  double lambda = 0.0;
  double grad_tol = 0.0;
  double curv_tol = -1.0;
};

int run_classify(const Globals&, const ClassifyArgs& a) {
  auto scenario = a.scenario.empty() ? canonical_example() : load_scenario(a.scenario);
  const auto kind = parse_kind(a.kind);
  auto p = parse_reals(a.point, "--point");
  if (p.size() != toa_scenario_dim(scenario.get()))
    throw ApiError("--point needs " + std::to_string(toa_scenario_dim(scenario.get())) + " coordinates");
  if (lifted(kind)) p.push_back(a.lambda);
  toa_class cls{};
  char* json = nullptr;
  check(toa_classify(scenario.get(), kind, p.data(), p.size(), a.grad_tol, a.curv_tol, &cls, &json), "classify");
  std::cout << take(json) << '\n';
  return kExitOk;
}

// ---- basin ---------------------------------------------------------------

struct BasinArgs {
  std::string scenario;
  std::string kind = "F2";
  std::string grid = "-3,3,-3,3";
  double step = 0.1;
  std::vector<std::string> local_minima;
  double lambda0 = 1.0;
  std::string settings;
};

int run_basin(const Globals& g, const BasinArgs& a) {
  const bool default_example = a.scenario.empty();
  auto scenario = default_example ? canonical_example() : load_scenario(a.scenario);
  const auto kind = parse_kind(a.kind);
  const auto box = parse_reals(a.grid, "--grid");
  if (box.size() != 4) throw ApiError("--grid needs xmin,xmax,ymin,ymax");
  const toa_basin_grid grid{box[0], box[1], box[2], box[3], a.step};

  std::vector<double> minima;
  for (const auto& m : a.local_minima) {
    const auto v = parse_reals(m, "--local-min");
    if (v.size() != 2) throw ApiError("--local-min needs x,y");
    minima.insert(minima.end(), v.begin(), v.end());
  }
  if (default_example && minima.empty()) minima = {0.0, 0.0};

  const auto settings = solver_settings(a.settings);
  toa_basin* raw = nullptr;
  check(toa_basin_sweep(scenario.get(), kind, &grid, minima.data(), minima.size() / 2, a.lambda0, &settings, &raw),
        "basin sweep");
  BasinPtr basin(raw);
  const auto path = ensure_dir(g.out_dir) / (std::string("basin_") + toa_objective_name(kind) + ".csv");
  check(toa_basin_write_csv(basin.get(), path.c_str()), "writing the basin raster");

  int counts[3] = {0, 0, 0};
  for (std::size_t iy = 0; iy < toa_basin_ny(basin.get()); ++iy)
    for (std::size_t ix = 0; ix < toa_basin_nx(basin.get()); ++ix) ++counts[toa_basin_label_at(basin.get(), ix, iy)];
  if (g.json)
    std::cout << "{\"kind\": \"" << toa_objective_name(kind) << "\", \"global\": " << counts[0]
              << ", \"local\": " << counts[1] << ", \"diverged\": " << counts[2] << ", \"csv\": \"" << path.string()
              << "\"}\n";
  else
    std::cout << toa_objective_name(kind) << ": GlobalMin " << counts[0] << ", LocalMin " << counts[1]
              << ", Diverged " << counts[2] << " -> " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-of-arrival lateration with a lifted least-squares objective"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(toa_version()));

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (campaigns, random start points)");
  app.add_option("--out-dir", g.out_dir, "Directory for CSV outputs")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Run LM on one scenario and print the result as JSON");
  solve->add_option("--scenario", solve_args.scenario, "Scenario JSON file")->required();
  solve->add_option("--kind", solve_args.kind, "F1, F2, FL1 or FL2")->capture_default_str();
  solve->add_option("--start", solve_args.start, "Start position x,y[,z] (default: random in the cube from --seed)");
  solve->add_option("--lambda0", solve_args.lambda0, "Initial lambda for lifted kinds")->capture_default_str();
  solve->add_option("--settings", solve_args.settings, "Solver settings JSON file");
  solve->add_flag("--trace", solve_args.trace, "Record iterates (JSON and CSV)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Monte-Carlo campaign; writes rows.csv and trials.csv");
  bench->add_option("--config", bench_args.config, "Campaign config JSON file");
  bench->add_option("--trials", bench_args.trials, "Override the number of trials");
  bench->add_option("--threads", bench_args.threads, "Worker threads");
  bench->add_option("--kinds", bench_args.kinds, "Objective kinds to run")->delimiter(',');
  bench->add_flag("--check", bench_args.check, "Exit 2 unless lifted kinds never fail and F2 minima audit clean");

  Example2dArgs ex_args;
  auto* ex = app.add_subcommand("example2d", "Planted 2-D example: F2 and FL2 traces from (-1, 2)");
  ex->add_option("--planted", ex_args.planted, "Planted example config JSON (default: the 4-station example)");
  ex->add_option("--settings", ex_args.settings, "Solver settings JSON file");

  ClassifyArgs cls_args;
  auto* cls = app.add_subcommand("classify", "Classify a point of an objective; prints JSON");
  cls->add_option("--scenario", cls_args.scenario, "Scenario JSON file (default: the planted 2-D example)");
  cls->add_option("--kind", cls_args.kind, "F1, F2, FL1 or FL2")->capture_default_str();
  cls->add_option("--point", cls_args.point, "Position x,y[,z]")->required();
  cls->add_option("--lambda", cls_args.lambda, "Lambda for lifted kinds")->capture_default_str();
  cls->add_option("--grad-tol", cls_args.grad_tol, "Gradient tolerance (default 1e-6 * (1 + F))");
  cls->add_option("--curv-tol", cls_args.curv_tol, "Curvature tolerance (default 1e-8)");

  BasinArgs basin_args;
  auto* basin = app.add_subcommand("basin", "Label a grid of start points by where LM converges");
  basin->add_option("--scenario", basin_args.scenario, "2-D scenario JSON file (default: the planted example)");
  basin->add_option("--kind", basin_args.kind, "F1, F2, FL1 or FL2")->capture_default_str();
  basin->add_option("--grid", basin_args.grid, "xmin,xmax,ymin,ymax")->capture_default_str();
  basin->add_option("--step", basin_args.step, "Grid spacing")->capture_default_str();
  basin->add_option("--local-min", basin_args.local_minima, "Known local minimum x,y (repeatable)");
  basin->add_option("--lambda0", basin_args.lambda0, "Initial lambda for lifted kinds")->capture_default_str();
  basin->add_option("--settings", basin_args.settings, "Solver settings JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    if (*solve) return run_solve(g, solve_args);
    if (*bench) return run_bench(g, bench_args);
    if (*ex) return run_example2d(g, ex_args);
    if (*cls) return run_classify(g, cls_args);
    if (*basin) return run_basin(g, basin_args);
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
