#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

#include "toalift/objectives.hpp"

namespace toalift::testing {

// Central differences are the independent reference for every analytic derivative.
inline double fd_step(double x) { return 1e-6 * (1.0 + std::abs(x)); }

inline Eigen::VectorXd fd_gradient(ObjectiveKind kind, const Scenario& s, const ParameterVector& p) {
  const bool with_lambda = p.lambda.has_value();
  const Eigen::VectorXd x = p.flat();
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x[i]);
    Eigen::VectorXd up = x, dn = x;
    up[i] += h;
    dn[i] -= h;
    g[i] = (evaluate(kind, s, ParameterVector::from_flat(up, with_lambda)) -
            evaluate(kind, s, ParameterVector::from_flat(dn, with_lambda))) /
           (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(ObjectiveKind kind, const Scenario& s, const ParameterVector& p) {
  const bool with_lambda = p.lambda.has_value();
  const Eigen::VectorXd x = p.flat();
  Eigen::MatrixXd h(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = fd_step(x[i]);
    Eigen::VectorXd up = x, dn = x;
    up[i] += step;
    dn[i] -= step;
    h.col(i) = (gradient(kind, s, ParameterVector::from_flat(up, with_lambda)) -
                gradient(kind, s, ParameterVector::from_flat(dn, with_lambda))) /
               (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

// Relative error with a unit floor, so entries near zero compare absolutely.
inline double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

inline Scenario canonical_scenario() {
  Eigen::MatrixXd st(4, 2);
  st << 0, 0, 0.5, -2, 0.5, 1, 0.5, 3;
  return Scenario(Constellation(st), Eigen::Vector2d(1, 0));
}

}  // namespace toalift::testing
