#include "toalift/optimizer.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "toalift/errors.hpp"

namespace toalift {

SolverSettings SolverSettings::defaults_for(Eigen::Index n_vars) {
  SolverSettings s;
  s.max_function_evals = static_cast<int>(100 * n_vars);
  return s;
}

int SolverSettings::function_eval_cap(Eigen::Index n_vars) const {
  return max_function_evals > 0 ? max_function_evals : static_cast<int>(100 * n_vars);
}

void SolverSettings::validate() const {
  require(max_iterations >= 1, "max_iterations must be >= 1");
  require(max_function_evals >= 0, "max_function_evals must be >= 1 (or 0 for the default)");
  require(f_tol > 0 && x_tol > 0 && optimality_tol > 0 && initial_damping > 0, "solver tolerances must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::FTol: return "FTol";
    case Termination::XTol: return "XTol";
    case Termination::Optimality: return "Optimality";
    case Termination::MaxIter: return "MaxIter";
    case Termination::MaxFeval: return "MaxFeval";
  }
  return "?";
}

namespace {

struct Linearization {
  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  double value = 0.0;
};

// Floor on diag(J^T J) entries under Marquardt scaling.
constexpr double kMinScale = 1e-12;
constexpr double kMaxDamping = 1e32;
const double kSqrtEps = std::sqrt(std::numeric_limits<double>::epsilon());

}  // namespace

OptimizationResult solve(ObjectiveKind kind, const Scenario& scenario, const ParameterVector& x0,
                         const SolverSettings& settings) {
  settings.validate();
  check_parameters(kind, scenario, x0);
  if (is_lifted(kind))
    require(*x0.lambda != 0.0, "lifted objectives must start with lambda != 0; the lambda gradient vanishes there");

  const bool with_lambda = is_lifted(kind);
  const Eigen::Index n = x0.size();
  const int feval_cap = settings.function_eval_cap(n);

  OptimizationResult out;
  Eigen::VectorXd x = x0.flat();
  if (settings.record_trace) out.trace.push_back(x0);

  auto linearize = [&](const Eigen::VectorXd& at) {
    const auto p = ParameterVector::from_flat(at, with_lambda);
    Linearization lin;
    lin.r = residuals(kind, scenario, p);
    lin.j = residual_jacobian(kind, scenario, p);
    lin.value = lin.r.squaredNorm();
    return lin;
  };

  Linearization cur = linearize(x);
  out.function_evals = 1;
  double mu = settings.initial_damping;

  auto finish = [&](Termination why) {
    out.final_point = ParameterVector::from_flat(x, with_lambda);
    out.final_value = cur.value;
    out.termination = why;
    return out;
  };

  Eigen::VectorXd jtr = cur.j.transpose() * cur.r;
  if ((2.0 * jtr).lpNorm<Eigen::Infinity>() <= settings.optimality_tol) return finish(Termination::Optimality);

  while (true) {
    if (out.iterations >= settings.max_iterations) return finish(Termination::MaxIter);
    if (out.function_evals >= feval_cap) return finish(Termination::MaxFeval);
    ++out.iterations;

    const Eigen::MatrixXd jtj = cur.j.transpose() * cur.j;
    const Eigen::VectorXd scale = settings.damping_scale == DampingScale::Identity
                                      ? Eigen::VectorXd::Ones(n).eval()
                                      : jtj.diagonal().cwiseMax(kMinScale).eval();
    Eigen::MatrixXd lhs = jtj;
    lhs.diagonal() += mu * scale;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
    Eigen::VectorXd step;
    if (ldlt.info() == Eigen::Success) step = ldlt.solve(-jtr);
    if (step.size() != n || !step.allFinite()) {
      mu = std::min(mu * 10.0, kMaxDamping);
      continue;
    }

    const Eigen::VectorXd trial = x + step;
    ++out.function_evals;

    std::optional<Linearization> next;
    const double trial_value =
        residuals(kind, scenario, ParameterVector::from_flat(trial, with_lambda)).squaredNorm();
    if (std::isfinite(trial_value) && trial_value < cur.value) {
      try {
        next = linearize(trial);
      } catch (const NonDifferentiablePoint&) {
        next.reset();
      }
    }

    const bool tiny_step = step.norm() <= settings.x_tol * (kSqrtEps + x.norm());
    if (!next) {
      mu = std::min(mu * 10.0, kMaxDamping);
      if (tiny_step) return finish(Termination::XTol);
      continue;
    }

    const double prev_value = cur.value;
    x = trial;
    cur = std::move(*next);
    mu = std::max(mu / 10.0, std::numeric_limits<double>::min());
    if (settings.record_trace) out.trace.push_back(ParameterVector::from_flat(x, with_lambda));

    jtr = cur.j.transpose() * cur.r;
    if ((2.0 * jtr).lpNorm<Eigen::Infinity>() <= settings.optimality_tol) return finish(Termination::Optimality);
    if (prev_value - cur.value <= settings.f_tol * prev_value) return finish(Termination::FTol);
    if (tiny_step) return finish(Termination::XTol);
  }
}

}  // namespace toalift
