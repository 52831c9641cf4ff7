#include "toalift/objectives.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "toalift/errors.hpp"

namespace toalift {

std::string_view to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::F1: return "F1";
    case ObjectiveKind::F2: return "F2";
    case ObjectiveKind::FL1: return "FL1";
    case ObjectiveKind::FL2: return "FL2";
  }
  return "?";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "F1") return ObjectiveKind::F1;
  if (up == "F2") return ObjectiveKind::F2;
  if (up == "FL1") return ObjectiveKind::FL1;
  if (up == "FL2") return ObjectiveKind::FL2;
  throw ConfigError("unknown objective kind '" + std::string(name) + "' (expected F1, F2, FL1 or FL2)");
}

Eigen::VectorXd ParameterVector::flat() const {
  Eigen::VectorXd v(size());
  v.head(position.size()) = position;
  if (lambda) v(position.size()) = *lambda;
  return v;
}

ParameterVector ParameterVector::from_flat(const Eigen::VectorXd& v, bool with_lambda) {
  if (!with_lambda) return ParameterVector(v);
  return ParameterVector(v.head(v.size() - 1), v(v.size() - 1));
}

void check_parameters(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  require(p.position.size() == scenario.dim(), "parameter dimension " + std::to_string(p.position.size()) +
                                                   " does not match scenario dimension " +
                                                   std::to_string(scenario.dim()));
  if (is_lifted(kind))
    require(p.lambda.has_value(), std::string(to_string(kind)) + " requires a lambda component");
  else
    require(!p.lambda.has_value(), std::string(to_string(kind)) + " does not take a lambda component");
  require(p.position.allFinite() && (!p.lambda || std::isfinite(*p.lambda)), "parameters must be finite");
}

namespace {

// Per-station quantities shared by every evaluation path. g_i is the gradient
// of the lifted squared distance divided by two: (p - a_i, lambda).
struct StationTerms {
  Eigen::MatrixXd g;       // N x n
  Eigen::VectorXd sq;      // |p - a_i|^2 + lambda^2
  Eigen::VectorXd d;
};

StationTerms station_terms(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  check_parameters(kind, scenario, p);
  const auto& a = scenario.constellation().matrix();
  const Eigen::Index n_st = a.rows();
  const Eigen::Index dim = a.cols();
  const Eigen::Index n = p.size();
  const double lam = p.lambda.value_or(0.0);

  StationTerms t;
  t.g.resize(n_st, n);
  t.sq.resize(n_st);
  t.d = scenario.distances();
  for (Eigen::Index i = 0; i < n_st; ++i) {
    t.g.row(i).head(dim) = p.position.transpose() - a.row(i);
    if (p.lambda) t.g(i, dim) = lam;
    t.sq(i) = t.g.row(i).squaredNorm();
  }
  return t;
}

void require_differentiable(ObjectiveKind kind, const StationTerms& t) {
  if (!is_range_form(kind)) return;
  for (Eigen::Index i = 0; i < t.sq.size(); ++i)
    if (t.sq(i) == 0.0)
      throw NonDifferentiablePoint(std::string(to_string(kind)) + " is not differentiable at station " +
                                   std::to_string(i) + " with lambda = 0");
}

Eigen::VectorXd residuals_from(ObjectiveKind kind, const StationTerms& t) {
  if (is_range_form(kind)) return 0.5 * (t.sq.array().sqrt() - t.d.array()).matrix();
  return 0.5 * (t.sq.array() - t.d.array().square()).matrix();
}

Eigen::MatrixXd jacobian_from(ObjectiveKind kind, const StationTerms& t) {
  if (!is_range_form(kind)) return t.g;
  Eigen::MatrixXd j = t.g;
  for (Eigen::Index i = 0; i < j.rows(); ++i) j.row(i) /= 2.0 * std::sqrt(t.sq(i));
  return j;
}

}  // namespace

Eigen::VectorXd residuals(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  return residuals_from(kind, station_terms(kind, scenario, p));
}

Eigen::MatrixXd residual_jacobian(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  const auto t = station_terms(kind, scenario, p);
  require_differentiable(kind, t);
  return jacobian_from(kind, t);
}

double evaluate(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  return residuals(kind, scenario, p).squaredNorm();
}

Eigen::VectorXd gradient(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  const auto t = station_terms(kind, scenario, p);
  require_differentiable(kind, t);
  return 2.0 * jacobian_from(kind, t).transpose() * residuals_from(kind, t);
}

Eigen::MatrixXd hessian(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  const auto t = station_terms(kind, scenario, p);
  require_differentiable(kind, t);
  const Eigen::VectorXd r = residuals_from(kind, t);
  const Eigen::MatrixXd j = jacobian_from(kind, t);
  const Eigen::Index n = t.g.cols();

  // H = 2 * sum_i (J_i J_i^T + r_i * Hess(r_i))
  Eigen::MatrixXd h = 2.0 * j.transpose() * j;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < t.g.rows(); ++i) {
    if (is_range_form(kind)) {
      const double rho = std::sqrt(t.sq(i));
      const Eigen::VectorXd gi = t.g.row(i).transpose();
      h += 2.0 * r(i) * 0.5 * (eye / rho - gi * gi.transpose() / (rho * rho * rho));
    } else {
      h += 2.0 * r(i) * eye;
    }
  }
  return 0.5 * (h + h.transpose());
}

EvalReport evaluate_all(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p) {
  return EvalReport{evaluate(kind, scenario, p), gradient(kind, scenario, p), hessian(kind, scenario, p)};
}

LambdaDerivatives lambda_quartic_at(const Scenario& scenario, const ParameterVector& p) {
  require(p.lambda.has_value(), "lambda derivatives need a lambda component");
  check_parameters(ObjectiveKind::FL2, scenario, p);
  const auto& a = scenario.constellation().matrix();
  const auto& d = scenario.distances();
  const double lam = *p.lambda;
  const double n = static_cast<double>(a.rows());
  double sum_rho = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    sum_rho += (p.position.transpose() - a.row(i)).squaredNorm() - d(i) * d(i);
  return {sum_rho + 3.0 * n * lam * lam, 6.0 * n * lam, 6.0 * n};
}

}  // namespace toalift
