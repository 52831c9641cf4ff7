#include "toalift/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "toalift/errors.hpp"
#include "toalift/stationarity.hpp"

namespace toalift {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TrialResult run_trial(const Scenario& scenario, ObjectiveKind kind, const ParameterVector& x0,
                      const SolverSettings& settings, std::uint64_t scenario_id) {
  TrialResult t;
  t.scenario_id = scenario_id;
  t.kind = kind;
  try {
    const auto res = solve(kind, scenario, x0, settings);
    t.error = (res.final_point.position - scenario.ground_truth()).norm();
    t.failure = t.error > kFailureThreshold;
    t.iterations = res.iterations;
    t.termination = std::string(to_string(res.termination));
    t.final_position = res.final_point.position;
  } catch (const std::exception&) {
    t.error = std::numeric_limits<double>::quiet_NaN();
    t.termination = "SolverError";
  }
  return t;
}

void CampaignConfig::validate() const {
  generator.validate();
  settings.validate();
  require(trials >= 1, "trials must be >= 1");
  require(!kinds.empty(), "campaign needs at least one objective kind");
  require(threads >= 1, "threads must be >= 1");
}

namespace {

struct TrialBlock {
  std::vector<TrialResult> results;
  std::vector<std::pair<ObjectiveKind, int>> audit;  // (unlifted kind, 0 = unverified, 1 = saddle, 2 = counterexample)
};

TrialBlock run_one(const CampaignConfig& config, std::uint64_t id) {
  TrialBlock block;
  Rng rng = Rng::for_stream(config.generator.seed, id);
  const Scenario scenario = random_scenario(config.generator, rng);
  const Position start = random_position(config.generator, rng);

  for (ObjectiveKind kind : config.kinds) {
    const ParameterVector x0 = is_lifted(kind) ? ParameterVector(start, 1.0) : ParameterVector(start);
    block.results.push_back(run_trial(scenario, kind, x0, config.settings, id));
    if (!config.audit_saddles || is_lifted(kind) || !block.results.back().failure) continue;

    const auto polished = refine_minimum(kind, scenario, block.results.back().final_position);
    int verdict = 0;
    if (polished && (*polished - scenario.ground_truth()).norm() > kFailureThreshold) {
      try {
        const auto rep = classify(lifted(kind), scenario, ParameterVector(*polished, 0.0));
        verdict = rep.classification == StationaryClass::Saddle ? 1 : 2;
      } catch (const NonDifferentiablePoint&) {
        verdict = 2;
      }
    }
    block.audit.emplace_back(kind, verdict);
  }
  return block;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.trials);
  std::vector<TrialBlock> blocks(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) blocks[i] = run_one(config, i);
  };
  const int n_threads = std::min<int>(config.threads, config.trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  CampaignResult out;
  out.trials.reserve(n * config.kinds.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& t : blocks[i].results) out.trials.push_back(std::move(t));
    for (const auto& [kind, verdict] : blocks[i].audit) {
      auto& audit = out.audits[kind];
      ++audit.failures;
      if (verdict == 0) continue;
      ++audit.verified_minima;
      if (verdict == 1)
        ++audit.saddles;
      else
        audit.counterexamples.push_back(i);
    }
  }
  out.rows = aggregate(out.trials, config.generator.n_stations);
  return out;
}

std::vector<BenchmarkRow> aggregate(std::span<const TrialResult> trials, int n_stations) {
  std::vector<BenchmarkRow> rows;
  auto row_for = [&](ObjectiveKind kind) -> BenchmarkRow& {
    for (auto& r : rows)
      if (r.kind == kind) return r;
    rows.push_back(BenchmarkRow{n_stations, kind});
    return rows.back();
  };
  std::vector<double> sums;
  for (const auto& t : trials) {
    auto& row = row_for(t.kind);
    if (t.solver_error()) {
      ++row.solver_errors;
      continue;
    }
    ++row.trial_count;
    row.failure_count += t.failure ? 1 : 0;
    row.mean_error += t.error;
  }
  for (auto& row : rows)
    if (row.trial_count > 0) row.mean_error /= row.trial_count;
  // Second pass: squared deviations about the mean.
  for (const auto& t : trials) {
    if (t.solver_error()) continue;
    auto& row = row_for(t.kind);
    const double dev = t.error - row.mean_error;
    row.std_error += dev * dev;
  }
  for (auto& row : rows) row.std_error = row.trial_count > 0 ? std::sqrt(row.std_error / row.trial_count) : 0.0;
  return rows;
}

void write_trials_csv(std::ostream& out, std::span<const TrialResult> trials) {
  out << "scenario_id,kind,error,failure,iterations,termination\n";
  for (const auto& t : trials)
    out << t.scenario_id << ',' << to_string(t.kind) << ',' << format_real(t.error) << ',' << (t.failure ? 1 : 0)
        << ',' << t.iterations << ',' << t.termination << '\n';
}

void write_rows_csv(std::ostream& out, std::span<const BenchmarkRow> rows) {
  out << "# std is the population standard deviation; failures are trials with error > 0.5; "
         "all kinds share each trial's start position\n";
  out << "n,kind,mean,std,failures,trials\n";
  for (const auto& r : rows)
    out << r.n_stations << ',' << to_string(r.kind) << ',' << format_real(r.mean_error) << ','
        << format_real(r.std_error) << ',' << r.failure_count << ',' << r.trial_count << '\n';
}

std::vector<TrialResult> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "scenario_id,kind,error,failure,iterations,termination")
    throw ConfigError("trials CSV: unexpected header");
  std::vector<TrialResult> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, kind, error, failure, iterations, termination;
    if (!std::getline(ss, id, ',') || !std::getline(ss, kind, ',') || !std::getline(ss, error, ',') ||
        !std::getline(ss, failure, ',') || !std::getline(ss, iterations, ',') || !std::getline(ss, termination))
      throw ConfigError("trials CSV: malformed line '" + line + "'");
    TrialResult t;
    try {
      t.scenario_id = std::stoull(id);
      t.kind = parse_objective_kind(kind);
      t.error = std::stod(error);
      t.failure = failure == "1";
      t.iterations = std::stoi(iterations);
    } catch (const std::logic_error&) {
      throw ConfigError("trials CSV: malformed line '" + line + "'");
    }
    t.termination = termination;
    out.push_back(std::move(t));
  }
  return out;
}

std::string_view to_string(BasinLabel label) {
  switch (label) {
    case BasinLabel::GlobalMin: return "GlobalMin";
    case BasinLabel::LocalMin: return "LocalMin";
    case BasinLabel::Diverged: return "Diverged";
  }
  return "?";
}

int BasinGrid::nx() const { return static_cast<int>(std::lround((x_max - x_min) / step)) + 1; }
int BasinGrid::ny() const { return static_cast<int>(std::lround((y_max - y_min) / step)) + 1; }

BasinSweep basin_sweep(const Scenario& scenario, ObjectiveKind kind, const BasinGrid& grid,
                       std::span<const Position> local_minima, const SolverSettings& settings, double lambda0,
                       double radius) {
  require(scenario.dim() == 2, "basin sweeps need a 2-D scenario");
  require(grid.step > 0.0 && grid.x_max >= grid.x_min && grid.y_max >= grid.y_min, "invalid basin grid");
  for (const auto& m : local_minima) require(m.size() == 2, "local minima must be 2-D");

  BasinSweep sweep;
  sweep.grid = grid;
  sweep.kind = kind;
  const int nx = grid.nx();
  const int ny = grid.ny();
  sweep.labels.reserve(static_cast<std::size_t>(nx * ny));
  sweep.finals.reserve(static_cast<std::size_t>(nx * ny));
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Position start(2);
      start << grid.x_at(ix), grid.y_at(iy);
      const ParameterVector x0 = is_lifted(kind) ? ParameterVector(start, lambda0) : ParameterVector(start);
      BasinLabel label = BasinLabel::Diverged;
      Position final_pos = Position::Constant(2, std::numeric_limits<double>::quiet_NaN());
      try {
        final_pos = solve(kind, scenario, x0, settings).final_point.position;
        double best = (final_pos - scenario.ground_truth()).norm();
        if (best <= radius) label = BasinLabel::GlobalMin;
        for (const auto& m : local_minima) {
          const double dist = (final_pos - m).norm();
          if (dist <= radius && dist < best) {
            best = dist;
            label = BasinLabel::LocalMin;
          }
        }
      } catch (const std::exception&) {
        label = BasinLabel::Diverged;
      }
      sweep.labels.push_back(label);
      sweep.finals.push_back(std::move(final_pos));
    }
  }
  return sweep;
}

void write_basin_csv(std::ostream& out, const BasinSweep& sweep) {
  out << "x,y,label,final_x,final_y\n";
  const int nx = sweep.grid.nx();
  for (std::size_t k = 0; k < sweep.labels.size(); ++k) {
    const int ix = static_cast<int>(k) % nx;
    const int iy = static_cast<int>(k) / nx;
    out << format_real(sweep.grid.x_at(ix)) << ',' << format_real(sweep.grid.y_at(iy)) << ','
        << to_string(sweep.labels[k]) << ',' << format_real(sweep.finals[k](0)) << ','
        << format_real(sweep.finals[k](1)) << '\n';
  }
}

Example2d run_example2d(SolverSettings settings) {
  settings.record_trace = true;
  Scenario scenario = planted_example(PlantedExampleConfig{});
  Position start(2);
  start << -1.0, 2.0;
  auto unlifted_res = solve(ObjectiveKind::F2, scenario, ParameterVector(start), settings);
  auto lifted_res = solve(ObjectiveKind::FL2, scenario, ParameterVector(start, 1.0), settings);
  return Example2d{std::move(scenario), std::move(start), std::move(unlifted_res), std::move(lifted_res)};
}

void write_trace_csv(std::ostream& out, ObjectiveKind kind, const Scenario& scenario,
                     const OptimizationResult& result) {
  const int dim = scenario.dim();
  out << "step,x,y" << (dim == 3 ? ",z" : "") << ",lambda,value\n";
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const auto& p = result.trace[k];
    out << k;
    for (int c = 0; c < dim; ++c) out << ',' << format_real(p.position(c));
    out << ',' << format_real(p.lambda.value_or(0.0)) << ',' << format_real(evaluate(kind, scenario, p)) << '\n';
  }
}

}  // namespace toalift
