#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "toalift/objectives.hpp"
#include "toalift/optimizer.hpp"
#include "toalift/scenario.hpp"

namespace toalift {

enum class StationaryClass { Minimum, Saddle, Maximum, Degenerate, NotStationary };
std::string_view to_string(StationaryClass c);

struct StationaryReport {
  ParameterVector point;
  double value = 0.0;
  Eigen::VectorXd gradient;
  double gradient_norm = 0.0;
  Eigen::VectorXd hessian_eigenvalues;  // ascending
  StationaryClass classification = StationaryClass::NotStationary;
  double grad_tol = 0.0;
  double curv_tol = 0.0;
};

constexpr double kDefaultCurvatureTol = 1e-8;
/// Scale-aware default: 1e-6 * (1 + F(p)).
double default_gradient_tol(double objective_value);

/// Gradient and Hessian spectrum at p. NotStationary when |grad|_2 > grad_tol;
/// otherwise Minimum / Maximum when every eigenvalue clears curv_tol on one
/// side, Saddle when eigenvalues of both signs clear it, Degenerate otherwise.
StationaryReport classify(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p,
                          std::optional<double> grad_tol = std::nullopt,
                          double curv_tol = kDefaultCurvatureTol);

/// Newton polish of an approximate minimum of an unlifted kind. Returns the
/// polished position when it classifies as Minimum, nullopt otherwise.
std::optional<Position> refine_minimum(ObjectiveKind kind, const Scenario& scenario, const Position& start);

/// Distinct non-global minima of an unlifted kind found by LM from `starts`
/// random initial points (drawn in `config`'s cube) followed by refine_minimum.
/// A point counts as non-global when it lies more than `min_error` from the
/// ground truth.
std::vector<Position> find_local_minima(ObjectiveKind kind, const Scenario& scenario, const GeneratorConfig& config,
                                        Rng& rng, int starts = 100, double min_error = 0.5);

/// Rigid motion that puts a local minimum at the origin and the ground truth
/// on the positive x-axis.
struct CanonicalFrame {
  Scenario scenario;
  double x_g = 0.0;
  Position origin;            // the local minimum, original coordinates
  Eigen::MatrixXd rotation;   // new = rotation * (old - origin)
};
CanonicalFrame canonical_frame(const Scenario& scenario, const Position& local_min);

/// Station x-coordinate sums in a canonical frame and the two bounds a genuine
/// F2 local minimum must satisfy:
///   linear:    2 * sum(a_i)   < N * x_g
///   quadratic: 4 * sum(a_i^2) < N * x_g^2
struct SaddleInequalities {
  double sum_a = 0.0;
  double sum_a_sq = 0.0;
  double n = 0.0;
  double x_g = 0.0;
  bool linear_bound_holds = false;
  bool quadratic_bound_holds = false;
};
SaddleInequalities saddle_inequalities(const CanonicalFrame& frame);

/// M = sum_i (a_i - a*)(a_i - a*)^T with a* the station centroid.
struct SpreadMatrix {
  Eigen::MatrixXd m;
  Eigen::VectorXd eigenvalues;  // ascending
  bool positive_definite(double rel_tol = 1e-12) const;
};
SpreadMatrix spread_matrix(const Constellation& constellation);

/// lambda^2 that makes the FL2 lambda-derivative vanish at position x:
/// -sum(|x - a_i|^2 - d_i^2) / N. Negative when no real lambda exists.
double constrained_lambda_squared(const Scenario& scenario, const Position& x);

/// At a point with lambda != 0 on the zero set of the FL2 lambda-derivative,
/// the FL2 position gradient equals 2 M (x - x_G). Returns the max-norm
/// difference of the two sides. Throws ContractViolation when lambda is absent,
/// zero, or the constraint is off by more than `constraint_tol` (relative).
double lifted_gradient_identity_check(const Scenario& scenario, const ParameterVector& p,
                                      double constraint_tol = 1e-9);

}  // namespace toalift
