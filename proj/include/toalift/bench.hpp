#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "toalift/objectives.hpp"
#include "toalift/optimizer.hpp"
#include "toalift/scenario.hpp"

namespace toalift {

/// Position error above which a trial counts as converged to a wrong basin.
constexpr double kFailureThreshold = 0.5;

struct TrialResult {
  std::uint64_t scenario_id = 0;
  ObjectiveKind kind = ObjectiveKind::F2;
  double error = 0.0;  // |final position - ground truth|, NaN on solver error
  bool failure = false;
  int iterations = 0;
  std::string termination;  // Termination name, or "SolverError"
  Position final_position;  // not written to CSV

  bool solver_error() const { return termination == "SolverError"; }
};

struct BenchmarkRow {
  int n_stations = 0;
  ObjectiveKind kind = ObjectiveKind::F2;
  double mean_error = 0.0;
  double std_error = 0.0;  // population form
  int failure_count = 0;
  int trial_count = 0;     // trials that produced a solver result
  int solver_errors = 0;
};

/// One solve. Solver exceptions are recorded, never propagated.
TrialResult run_trial(const Scenario& scenario, ObjectiveKind kind, const ParameterVector& x0,
                      const SolverSettings& settings, std::uint64_t scenario_id = 0);

struct CampaignConfig {
  GeneratorConfig generator;
  std::vector<ObjectiveKind> kinds{ObjectiveKind::F1, ObjectiveKind::F2, ObjectiveKind::FL1, ObjectiveKind::FL2};
  int trials = 1000;
  SolverSettings settings;
  int threads = 1;
  /// Classify the lifted objective at every verified minimum reached by a
  /// failed unlifted solve.
  bool audit_saddles = true;

  void validate() const;
};

/// Outcome of checking failed unlifted trials against the lifted objective.
struct SaddleAudit {
  int failures = 0;           // failed unlifted trials
  int verified_minima = 0;    // of those, final points that polish to a strict minimum
  int saddles = 0;            // lifted objective is a saddle there (lambda = 0)
  std::vector<std::uint64_t> counterexamples;  // scenario ids where it is not
};

struct CampaignResult {
  std::vector<BenchmarkRow> rows;
  std::vector<TrialResult> trials;  // scenario_id order, kinds in config order
  std::map<ObjectiveKind, SaddleAudit> audits;  // keyed by unlifted kind
};

/// Trial i uses Rng::for_stream(seed, i): a fresh scenario, then one start
/// position shared by every kind (lambda = 1 appended for lifted kinds).
CampaignResult run_campaign(const CampaignConfig& config);

/// Per-kind aggregates in first-appearance order of kinds.
std::vector<BenchmarkRow> aggregate(std::span<const TrialResult> trials, int n_stations);

void write_trials_csv(std::ostream& out, std::span<const TrialResult> trials);
void write_rows_csv(std::ostream& out, std::span<const BenchmarkRow> rows);
/// Reads back write_trials_csv output. Throws ConfigError on malformed input.
std::vector<TrialResult> read_trials_csv(std::istream& in);

enum class BasinLabel { GlobalMin, LocalMin, Diverged };
std::string_view to_string(BasinLabel label);

struct BasinGrid {
  double x_min = -3.0;
  double x_max = 3.0;
  double y_min = -3.0;
  double y_max = 3.0;
  double step = 0.1;

  int nx() const;
  int ny() const;
  double x_at(int ix) const { return x_min + ix * step; }
  double y_at(int iy) const { return y_min + iy * step; }
};

struct BasinSweep {
  BasinGrid grid;
  ObjectiveKind kind = ObjectiveKind::F2;
  std::vector<BasinLabel> labels;  // row-major: index = iy * nx + ix
  std::vector<Position> finals;

  BasinLabel at(int ix, int iy) const { return labels[static_cast<std::size_t>(iy * grid.nx() + ix)]; }
};

/// One solve per grid node (lambda0 appended for lifted kinds). A node is
/// labelled by the known stationary point its solve ends within `radius` of:
/// the ground truth, or one of `local_minima`; anything else is Diverged.
BasinSweep basin_sweep(const Scenario& scenario, ObjectiveKind kind, const BasinGrid& grid,
                       std::span<const Position> local_minima, const SolverSettings& settings = {},
                       double lambda0 = 1.0, double radius = kFailureThreshold);
void write_basin_csv(std::ostream& out, const BasinSweep& sweep);

/// The planted 2-D example (local minimum at the origin, target at (1, 0))
/// solved with F2 and FL2 from (-1, 2), lambda0 = 1, with traces.
struct Example2d {
  Scenario scenario;
  Position start;
  OptimizationResult unlifted;
  OptimizationResult lifted;
};
Example2d run_example2d(SolverSettings settings = {});

/// Trace columns: step,x,y[,z],lambda,value. Unlifted traces print lambda = 0.
void write_trace_csv(std::ostream& out, ObjectiveKind kind, const Scenario& scenario,
                     const OptimizationResult& result);

/// 17 significant digits ("%.17g"), used by every CSV writer.
std::string format_real(double v);

}  // namespace toalift
