#include "doctest.h"

#include <cmath>

#include "support.hpp"
#include "toalift/errors.hpp"
#include "toalift/objectives.hpp"
#include "toalift/scenario.hpp"

using namespace toalift;
using testing::canonical_scenario;
using testing::rel_error;

namespace {

constexpr ObjectiveKind kAllKinds[] = {ObjectiveKind::F1, ObjectiveKind::F2, ObjectiveKind::FL1, ObjectiveKind::FL2};

ParameterVector random_point(ObjectiveKind kind, const Scenario& s, Rng& rng) {
  Position p(s.dim());
  for (int k = 0; k < s.dim(); ++k) p[k] = rng.uniform(-2, 12);
  if (!is_lifted(kind)) return ParameterVector(p);
  const double mag = rng.uniform(0.1, 5.0);
  return ParameterVector(p, rng.uniform() < 0.5 ? -mag : mag);
}

// Brute-force objective straight from the definition, independent of residuals().
double direct_value(ObjectiveKind kind, const Scenario& s, const ParameterVector& p) {
  const double l2 = p.lambda ? *p.lambda * *p.lambda : 0.0;
  double f = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double sq = (p.position - s.constellation().station(i)).squaredNorm() + l2;
    const double d = s.distances()[static_cast<Eigen::Index>(i)];
    const double r = is_range_form(kind) ? std::sqrt(sq) - d : sq - d * d;
    f += r * r;
  }
  return 0.25 * f;
}

}  // namespace

TEST_CASE("kind helpers and parsing") {
  CHECK(is_lifted(ObjectiveKind::FL1));
  CHECK_FALSE(is_lifted(ObjectiveKind::F2));
  CHECK(unlifted(ObjectiveKind::FL2) == ObjectiveKind::F2);
  CHECK(lifted(ObjectiveKind::F1) == ObjectiveKind::FL1);
  for (auto k : kAllKinds) CHECK(parse_objective_kind(to_string(k)) == k);
  CHECK(parse_objective_kind("fl2") == ObjectiveKind::FL2);
  CHECK_THROWS_AS(parse_objective_kind("F3"), ConfigError);
}

TEST_CASE("parameter vector contract") {
  const auto s = canonical_scenario();
  CHECK_THROWS_AS(evaluate(ObjectiveKind::FL2, s, ParameterVector(Eigen::Vector2d(0, 0))), ContractViolation);
  CHECK_THROWS_AS(evaluate(ObjectiveKind::F2, s, ParameterVector(Eigen::Vector2d(0, 0), 1.0)), ContractViolation);
  CHECK_THROWS_AS(evaluate(ObjectiveKind::F2, s, ParameterVector(Eigen::Vector3d(0, 0, 0))), ContractViolation);
  CHECK_THROWS_AS(evaluate(ObjectiveKind::F2, s, ParameterVector(Eigen::Vector2d(0, INFINITY))), ContractViolation);
  const ParameterVector p(Eigen::Vector2d(1, 2), 3.0);
  const auto back = ParameterVector::from_flat(p.flat(), true);
  CHECK(back.position == p.position);
  CHECK(*back.lambda == 3.0);
  CHECK(p.size() == 3);
}

TEST_CASE("frozen values at the planted local minimum") {
  const auto s = canonical_scenario();
  const ParameterVector origin(Eigen::Vector2d(0, 0));
  const ParameterVector lifted_origin(Eigen::Vector2d(0, 0), 0.0);

  CHECK(evaluate(ObjectiveKind::F2, s, origin) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(evaluate(ObjectiveKind::FL2, s, lifted_origin) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(gradient(ObjectiveKind::F2, s, origin).norm() < 1e-14);

  const Eigen::MatrixXd h = hessian(ObjectiveKind::F2, s, origin);
  CHECK(h(0, 0) == doctest::Approx(0.5));
  CHECK(h(0, 1) == doctest::Approx(2.0));
  CHECK(h(1, 1) == doctest::Approx(27.0));

  const Eigen::MatrixXd hl = hessian(ObjectiveKind::FL2, s, lifted_origin);
  CHECK(hl(2, 2) == doctest::Approx(-1.0));
  CHECK(hl.topLeftCorner(2, 2).isApprox(h));
  CHECK(hl(0, 2) == 0.0);
  CHECK(hl(1, 2) == 0.0);

  const ParameterVector truth(Eigen::Vector2d(1, 0));
  for (auto k : {ObjectiveKind::F1, ObjectiveKind::F2}) CHECK(evaluate(k, s, truth) <= 1e-20);
}

TEST_CASE("objective equals the defining sum") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    GeneratorConfig cfg;
    cfg.dim = t % 2 ? 3 : 2;
    cfg.n_stations = 5;
    const auto s = random_scenario(cfg, rng);
    for (auto k : kAllKinds) {
      const auto p = random_point(k, s, rng);
      CHECK(evaluate(k, s, p) == doctest::Approx(direct_value(k, s, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic derivatives match central differences") {
  Rng rng(2024);
  double worst_grad = 0.0;
  double worst_hess = 0.0;
  for (auto k : kAllKinds) {
    for (int t = 0; t < 200; ++t) {
      GeneratorConfig cfg;
      cfg.dim = t % 2 ? 3 : 2;
      cfg.n_stations = 4 + t % 4;
      const auto s = random_scenario(cfg, rng);
      const auto p = random_point(k, s, rng);
      const auto rep = evaluate_all(k, s, p);
      worst_grad = std::max(worst_grad, rel_error(rep.gradient, testing::fd_gradient(k, s, p)));
      worst_hess = std::max(worst_hess, rel_error(rep.hessian, testing::fd_hessian(k, s, p)));
      CHECK(rep.hessian.isApprox(rep.hessian.transpose(), 1e-12));
      CHECK(rep.gradient.size() == p.size());
    }
  }
  CHECK(worst_grad < 1e-6);
  CHECK(worst_hess < 1e-5);
}

TEST_CASE("range form is not differentiable on a station at lambda zero") {
  const auto s = canonical_scenario();
  const ParameterVector on_station(Eigen::Vector2d(0.5, 1));
  CHECK_THROWS_AS(gradient(ObjectiveKind::F1, s, on_station), NonDifferentiablePoint);
  CHECK_THROWS_AS(hessian(ObjectiveKind::FL1, s, ParameterVector(Eigen::Vector2d(0.5, 1), 0.0)),
                  NonDifferentiablePoint);
  CHECK_NOTHROW(gradient(ObjectiveKind::FL1, s, ParameterVector(Eigen::Vector2d(0.5, 1), 0.5)));
  CHECK(evaluate(ObjectiveKind::F1, s, on_station) >= 0.0);
}

TEST_CASE("property: lifting is even in lambda and reduces to the plain objective at zero") {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    GeneratorConfig cfg;
    cfg.dim = t % 2 ? 3 : 2;
    const auto s = random_scenario(cfg, rng);
    for (auto k : {ObjectiveKind::FL1, ObjectiveKind::FL2}) {
      const auto p = random_point(k, s, rng);
      ParameterVector neg = p;
      neg.lambda = -*p.lambda;
      CHECK(evaluate(k, s, neg) == evaluate(k, s, p));
      const Eigen::VectorXd g = gradient(k, s, p), gn = gradient(k, s, neg);
      CHECK(g.head(s.dim()).isApprox(gn.head(s.dim()), 1e-12));
      CHECK(g[s.dim()] == doctest::Approx(-gn[s.dim()]).epsilon(1e-12));

      ParameterVector zero = p;
      zero.lambda = 0.0;
      const ParameterVector plain(p.position);
      CHECK(evaluate(k, s, zero) == evaluate(unlifted(k), s, plain));
      if (k == ObjectiveKind::FL2) {
        const Eigen::MatrixXd h = hessian(k, s, zero);
        CHECK(h.col(s.dim()).head(s.dim()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(h.topLeftCorner(s.dim(), s.dim()).isApprox(hessian(ObjectiveKind::F2, s, plain), 1e-12));
      }
    }
  }
}

TEST_CASE("lambda derivatives of the squared lifted objective") {
  for (int n : {1, 4, 7}) {
    const int dim = n == 7 ? 3 : 2;
    Rng rng(static_cast<std::uint64_t>(n));
    Eigen::MatrixXd st(n, dim);
    for (Eigen::Index i = 0; i < st.size(); ++i) st.data()[i] = rng.uniform(0, 10);
    Position g(dim);
    for (int k = 0; k < dim; ++k) g[k] = rng.uniform(0, 10);
    const Scenario s(Constellation(st), g);
    const ParameterVector at_truth(s.ground_truth(), 0.0);
    const auto d = lambda_quartic_at(s, at_truth);
    CHECK(d.fourth == 6.0 * n);
    CHECK(std::abs(d.second) < 1e-12);
    CHECK(d.third == 0.0);
    CHECK(std::abs(hessian(ObjectiveKind::FL2, s, at_truth)(dim, dim)) < 1e-12);
  }
  // Away from the ground truth the second derivative agrees with the Hessian entry.
  const auto s = canonical_scenario();
  const ParameterVector p(Eigen::Vector2d(0.3, -0.7), 0.4);
  const auto d = lambda_quartic_at(s, p);
  CHECK(d.second == doctest::Approx(hessian(ObjectiveKind::FL2, s, p)(2, 2)).epsilon(1e-12));
  CHECK(d.fourth == 24.0);
}
