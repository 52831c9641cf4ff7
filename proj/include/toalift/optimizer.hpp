#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "toalift/objectives.hpp"

namespace toalift {

/// How the damping term of the normal equations is scaled.
enum class DampingScale {
  Identity,           ///< (J^T J + mu I), MATLAB's default (ScaleProblem = 'none')
  JacobianDiagonal,   ///< (J^T J + mu diag(J^T J)), Marquardt's variant
};

/// Levenberg-Marquardt settings. Defaults follow the MATLAB lsqnonlin
/// "levenberg-marquardt" defaults; max_function_evals defaults to 100 per
/// variable when left at zero.
struct SolverSettings {
  int max_iterations = 400;
  int max_function_evals = 0;
  double f_tol = 1e-6;
  double x_tol = 1e-6;
  double optimality_tol = 1e-4;
  double initial_damping = 1e-2;
  DampingScale damping_scale = DampingScale::Identity;
  bool record_trace = false;

  static SolverSettings defaults_for(Eigen::Index n_vars);
  /// Resolved evaluation cap.
  int function_eval_cap(Eigen::Index n_vars) const;
  void validate() const;
};

enum class Termination { FTol, XTol, Optimality, MaxIter, MaxFeval };
std::string_view to_string(Termination t);

struct OptimizationResult {
  ParameterVector final_point;
  double final_value = 0.0;
  int iterations = 0;
  int function_evals = 0;
  Termination termination = Termination::MaxIter;
  /// Accepted iterates, starting with x0. Empty unless record_trace was set.
  std::vector<ParameterVector> trace;
};

/// Damped Gauss-Newton on the residual vector of `kind`:
///   (J^T J + mu * D) step = -J^T r,   D = I or diag(J^T J)
/// mu shrinks by 10 on accepted steps and grows by 10 on rejected ones.
///
/// Termination, checked after every accepted step:
///   Optimality  |grad F|_inf <= optimality_tol (also checked at x0)
///   FTol        F_prev - F_new <= f_tol * F_prev
///   XTol        |step| <= x_tol * (sqrt(eps) + |x|)  (also ends on a rejected tiny step)
///
/// Throws ContractViolation for a lifted kind started at lambda = 0.
OptimizationResult solve(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& x0,
                         const SolverSettings& settings = {});

}  // namespace toalift
