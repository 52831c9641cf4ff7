#pragma once

#include <Eigen/Core>
#include <optional>
#include <string_view>

#include "toalift/geometry.hpp"

namespace toalift {

/// F1/F2 are the range and squared-range least-squares objectives. FL1/FL2 are
/// the lifted variants with an extra coordinate lambda whose square is added to
/// every squared station distance.
enum class ObjectiveKind { F1, F2, FL1, FL2 };

constexpr bool is_lifted(ObjectiveKind k) { return k == ObjectiveKind::FL1 || k == ObjectiveKind::FL2; }
constexpr bool is_range_form(ObjectiveKind k) { return k == ObjectiveKind::F1 || k == ObjectiveKind::FL1; }
/// FL1 -> F1, FL2 -> F2, unlifted kinds map to themselves.
constexpr ObjectiveKind unlifted(ObjectiveKind k) {
  return k == ObjectiveKind::FL1 ? ObjectiveKind::F1 : k == ObjectiveKind::FL2 ? ObjectiveKind::F2 : k;
}
constexpr ObjectiveKind lifted(ObjectiveKind k) {
  return k == ObjectiveKind::F1 ? ObjectiveKind::FL1 : k == ObjectiveKind::F2 ? ObjectiveKind::FL2 : k;
}

std::string_view to_string(ObjectiveKind k);
/// Accepts "F1", "F2", "FL1", "FL2" (case-insensitive). Throws ConfigError.
ObjectiveKind parse_objective_kind(std::string_view name);

/// Search state. `lambda` is present exactly for lifted objectives.
struct ParameterVector {
  Position position;
  std::optional<double> lambda;

  ParameterVector() = default;
  explicit ParameterVector(Position p, std::optional<double> l = std::nullopt)
      : position(std::move(p)), lambda(l) {}

  Eigen::Index size() const { return position.size() + (lambda ? 1 : 0); }
  /// Flat (x, y[, z][, lambda]) view used by the solver.
  Eigen::VectorXd flat() const;
  /// Inverse of flat(): the trailing entry becomes lambda when `with_lambda`.
  static ParameterVector from_flat(const Eigen::VectorXd& v, bool with_lambda);
};

struct EvalReport {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Throws ContractViolation when lambda presence does not match `kind` or the
/// dimension does not match the scenario.
void check_parameters(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p);

/// Residuals r_i with sum(r_i^2) equal to the objective (1/4 prefactor form).
///   squared form: r_i = 0.5 * (|p - a_i|^2 + lambda^2 - d_i^2)
///   range form:   r_i = 0.5 * (sqrt(|p - a_i|^2 + lambda^2) - d_i)
Eigen::VectorXd residuals(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p);

/// Jacobian of residuals(), one row per station. Throws NonDifferentiablePoint
/// for the range form at a station with lambda = 0.
Eigen::MatrixXd residual_jacobian(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p);

double evaluate(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p);
Eigen::VectorXd gradient(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p);
Eigen::MatrixXd hessian(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p);
EvalReport evaluate_all(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p);

/// Second, third and fourth lambda-derivatives of FL2 at p.
struct LambdaDerivatives {
  double second = 0.0;
  double third = 0.0;
  double fourth = 0.0;
};
LambdaDerivatives lambda_quartic_at(const Scenario& scenario, const ParameterVector& p);

}  // namespace toalift
