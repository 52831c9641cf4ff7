#include "toalift/stationarity.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "toalift/errors.hpp"

namespace toalift {

std::string_view to_string(StationaryClass c) {
  switch (c) {
    case StationaryClass::Minimum: return "Minimum";
    case StationaryClass::Saddle: return "Saddle";
    case StationaryClass::Maximum: return "Maximum";
    case StationaryClass::Degenerate: return "Degenerate";
    case StationaryClass::NotStationary: return "NotStationary";
  }
  return "?";
}

double default_gradient_tol(double objective_value) { return 1e-6 * (1.0 + std::abs(objective_value)); }

StationaryReport classify(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& p,
                          std::optional<double> grad_tol, double curv_tol) {
  require(curv_tol >= 0.0, "curvature tolerance must be non-negative");
  StationaryReport rep;
  rep.point = p;
  rep.value = evaluate(kind, scenario, p);
  rep.gradient = gradient(kind, scenario, p);
  rep.gradient_norm = rep.gradient.norm();
  rep.grad_tol = grad_tol.value_or(default_gradient_tol(rep.value));
  rep.curv_tol = curv_tol;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian(kind, scenario, p), Eigen::EigenvaluesOnly);
  rep.hessian_eigenvalues = eig.eigenvalues();

  if (rep.gradient_norm > rep.grad_tol) {
    rep.classification = StationaryClass::NotStationary;
    return rep;
  }
  const auto& ev = rep.hessian_eigenvalues;
  const bool any_neg = (ev.array() < -curv_tol).any();
  const bool any_pos = (ev.array() > curv_tol).any();
  const bool all_neg = (ev.array() < -curv_tol).all();
  const bool all_pos = (ev.array() > curv_tol).all();
  if (all_pos)
    rep.classification = StationaryClass::Minimum;
  else if (all_neg)
    rep.classification = StationaryClass::Maximum;
  else if (any_neg && any_pos)
    rep.classification = StationaryClass::Saddle;
  else
    rep.classification = StationaryClass::Degenerate;
  return rep;
}

std::optional<Position> refine_minimum(ObjectiveKind kind, const Scenario& scenario, const Position& start) {
  require(!is_lifted(kind), "refine_minimum works on unlifted objectives");
  Position x = start;
  try {
    for (int it = 0; it < 100; ++it) {
      const ParameterVector p(x);
      Eigen::LLT<Eigen::MatrixXd> llt(hessian(kind, scenario, p));
      if (llt.info() != Eigen::Success) return std::nullopt;
      const Eigen::VectorXd step = llt.solve(-gradient(kind, scenario, p));
      if (!step.allFinite()) return std::nullopt;
      x += step;
      if (step.norm() <= 1e-14 * (1.0 + x.norm())) break;
    }
    if (classify(kind, scenario, ParameterVector(x)).classification != StationaryClass::Minimum) return std::nullopt;
  } catch (const NonDifferentiablePoint&) {
    return std::nullopt;
  }
  return x;
}

std::vector<Position> find_local_minima(ObjectiveKind kind, const Scenario& scenario, const GeneratorConfig& config,
                                        Rng& rng, int starts, double min_error) {
  require(!is_lifted(kind), "local minima are searched on unlifted objectives");
  require(config.dim == scenario.dim(), "generator dimension must match the scenario");
  std::vector<Position> found;
  const auto settings = SolverSettings::defaults_for(scenario.dim());
  for (int s = 0; s < starts; ++s) {
    const ParameterVector x0(random_position(config, rng));
    OptimizationResult res;
    try {
      res = solve(kind, scenario, x0, settings);
    } catch (const NonDifferentiablePoint&) {
      continue;
    }
    if ((res.final_point.position - scenario.ground_truth()).norm() <= min_error) continue;
    auto refined = refine_minimum(kind, scenario, res.final_point.position);
    if (!refined || (*refined - scenario.ground_truth()).norm() <= min_error) continue;
    const bool seen = std::any_of(found.begin(), found.end(), [&](const Position& q) {
      return (q - *refined).norm() <= 1e-6 * (1.0 + q.norm());
    });
    if (!seen) found.push_back(*refined);
  }
  return found;
}

CanonicalFrame canonical_frame(const Scenario& scenario, const Position& local_min) {
  require(local_min.size() == scenario.dim(), "local minimum dimension does not match the scenario");
  const Eigen::VectorXd axis = scenario.ground_truth() - local_min;
  const double x_g = axis.norm();
  require(x_g > 1e-12 * (1.0 + scenario.ground_truth().norm()),
          "canonical frame needs the local minimum to differ from the ground truth");
  const Eigen::VectorXd u = axis / x_g;
  const int dim = scenario.dim();

  Eigen::MatrixXd q(dim, dim);
  if (dim == 2) {
    q << u(0), u(1), -u(1), u(0);
  } else {
    Eigen::Index least = 0;
    u.cwiseAbs().minCoeff(&least);
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(least) = 1.0;
    const Eigen::Vector3d u3 = u;
    const Eigen::Vector3d v = (e - e.dot(u3) * u3).normalized();
    const Eigen::Vector3d w = u3.cross(v);
    q.row(0) = u3.transpose();
    q.row(1) = v.transpose();
    q.row(2) = w.transpose();
  }

  const Eigen::MatrixXd& a = scenario.constellation().matrix();
  Eigen::MatrixXd moved = (a.rowwise() - local_min.transpose()) * q.transpose();
  Position target = Position::Zero(dim);
  target(0) = x_g;
  return CanonicalFrame{Scenario(Constellation(std::move(moved)), std::move(target)), x_g, local_min, q};
}

SaddleInequalities saddle_inequalities(const CanonicalFrame& frame) {
  require(frame.x_g > 0.0, "canonical frame needs x_g > 0");
  const Eigen::VectorXd a = frame.scenario.constellation().matrix().col(0);
  SaddleInequalities out;
  out.sum_a = a.sum();
  out.sum_a_sq = a.squaredNorm();
  out.n = static_cast<double>(a.size());
  out.x_g = frame.x_g;
  out.linear_bound_holds = 2.0 * out.sum_a < out.n * out.x_g;
  out.quadratic_bound_holds = 4.0 * out.sum_a_sq < out.n * out.x_g * out.x_g;
  return out;
}

bool SpreadMatrix::positive_definite(double rel_tol) const {
  const double top = std::max(eigenvalues.cwiseAbs().maxCoeff(), 1.0);
  return eigenvalues.minCoeff() > rel_tol * top;
}

SpreadMatrix spread_matrix(const Constellation& constellation) {
  const Eigen::MatrixXd& a = constellation.matrix();
  const Eigen::MatrixXd centered = a.rowwise() - a.colwise().mean();
  SpreadMatrix out;
  out.m = centered.transpose() * centered;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.m, Eigen::EigenvaluesOnly);
  out.eigenvalues = eig.eigenvalues();
  return out;
}

double constrained_lambda_squared(const Scenario& scenario, const Position& x) {
  require(x.size() == scenario.dim(), "position dimension does not match the scenario");
  const Eigen::MatrixXd& a = scenario.constellation().matrix();
  const Eigen::VectorXd& d = scenario.distances();
  const double sum_rho = ((a.rowwise() - x.transpose()).rowwise().squaredNorm() - d.array().square().matrix()).sum();
  return -sum_rho / static_cast<double>(a.rows());
}

double lifted_gradient_identity_check(const Scenario& scenario, const ParameterVector& p, double constraint_tol) {
  require(p.lambda.has_value() && *p.lambda != 0.0, "identity check needs lambda != 0");
  check_parameters(ObjectiveKind::FL2, scenario, p);
  const Eigen::MatrixXd& a = scenario.constellation().matrix();
  const Eigen::VectorXd& d = scenario.distances();
  const double lam2 = *p.lambda * *p.lambda;
  const Eigen::VectorXd sq = (a.rowwise() - p.position.transpose()).rowwise().squaredNorm();
  const double constraint = (sq.array() + lam2 - d.array().square()).sum();
  const double scale = (sq.array() + lam2 + d.array().square()).sum();
  require(std::abs(constraint) <= constraint_tol * std::max(scale, 1.0),
          "point does not satisfy the vanishing lambda-derivative constraint");

  const Eigen::VectorXd lhs = gradient(ObjectiveKind::FL2, scenario, p).head(scenario.dim());
  const Eigen::VectorXd rhs = 2.0 * spread_matrix(scenario.constellation()).m * (p.position - scenario.ground_truth());
  return (lhs - rhs).lpNorm<Eigen::Infinity>();
}

}  // namespace toalift
