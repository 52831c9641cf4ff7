#include "doctest.h"

#include "support.hpp"
#include "toalift/errors.hpp"
#include "toalift/optimizer.hpp"
#include "toalift/scenario.hpp"

using namespace toalift;
using testing::canonical_scenario;

TEST_CASE("settings defaults and validation") {
  const SolverSettings s;
  CHECK(s.max_iterations == 400);
  CHECK(s.function_eval_cap(3) == 300);
  CHECK(SolverSettings::defaults_for(2).function_eval_cap(2) == 200);
  SolverSettings bad;
  bad.f_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad = SolverSettings{};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(solve(ObjectiveKind::F2, canonical_scenario(), ParameterVector(Eigen::Vector2d(1, 1)), bad),
                  ContractViolation);
}

TEST_CASE("planted example: plain objective stalls, lifted one escapes") {
  const auto s = canonical_scenario();
  const auto f2 = solve(ObjectiveKind::F2, s, ParameterVector(Eigen::Vector2d(-1, 2)));
  CHECK(f2.termination == Termination::FTol);
  CHECK(f2.final_point.position.norm() < 2e-3);
  CHECK(f2.final_value - 0.25 < 1e-6);

  const auto fl2 = solve(ObjectiveKind::FL2, s, ParameterVector(Eigen::Vector2d(-1, 2), 1.0));
  CHECK((fl2.final_point.position - s.ground_truth()).norm() < 1e-3);
  CHECK(fl2.final_point.lambda.has_value());
}

TEST_CASE("start at the ground truth stops immediately") {
  const auto s = canonical_scenario();
  for (auto k : {ObjectiveKind::F1, ObjectiveKind::F2}) {
    const auto r = solve(k, s, ParameterVector(s.ground_truth()));
    CHECK(r.iterations == 0);
    CHECK(r.termination == Termination::Optimality);
    CHECK((r.final_point.position - s.ground_truth()).norm() <= 1e-6);
  }
}

TEST_CASE("lifted start needs nonzero lambda") {
  const auto s = canonical_scenario();
  CHECK_THROWS_AS(solve(ObjectiveKind::FL2, s, ParameterVector(Eigen::Vector2d(1, 1), 0.0)), ContractViolation);
  CHECK_THROWS_AS(solve(ObjectiveKind::FL2, s, ParameterVector(Eigen::Vector2d(1, 1))), ContractViolation);
}

TEST_CASE("iteration and evaluation caps") {
  const auto s = canonical_scenario();
  SolverSettings one;
  one.max_iterations = 1;
  const auto r = solve(ObjectiveKind::F2, s, ParameterVector(Eigen::Vector2d(-1, 2)), one);
  CHECK(r.iterations == 1);
  CHECK(r.termination == Termination::MaxIter);

  SolverSettings few;
  few.max_function_evals = 3;
  const auto q = solve(ObjectiveKind::F2, s, ParameterVector(Eigen::Vector2d(-1, 2)), few);
  CHECK(q.function_evals <= 3);
  CHECK(q.termination == Termination::MaxFeval);
}

TEST_CASE("property: traces decrease monotonically and start at x0") {
  Rng rng(77);
  for (int t = 0; t < 60; ++t) {
    GeneratorConfig cfg;
    cfg.dim = t % 2 ? 3 : 2;
    cfg.n_stations = cfg.dim + 2;
    const auto s = random_scenario(cfg, rng);
    for (auto k : {ObjectiveKind::F1, ObjectiveKind::F2, ObjectiveKind::FL1, ObjectiveKind::FL2}) {
      const auto x0 = random_initial(cfg, rng, k);
      SolverSettings settings;
      settings.record_trace = true;
      const auto r = solve(k, s, x0, settings);
      REQUIRE(!r.trace.empty());
      CHECK(r.trace.front().flat() == x0.flat());
      CHECK(r.trace.back().flat() == r.final_point.flat());
      CHECK(static_cast<int>(r.trace.size()) <= r.iterations + 1);
      double prev = evaluate(k, s, r.trace.front());
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        const double v = evaluate(k, s, r.trace[i]);
        CHECK(v < prev);
        prev = v;
      }
      CHECK(r.final_value == doctest::Approx(prev).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: solve is deterministic") {
  Rng rng(4);
  GeneratorConfig cfg;
  const auto s = random_scenario(cfg, rng);
  const auto x0 = random_initial(cfg, rng, ObjectiveKind::FL1);
  const auto a = solve(ObjectiveKind::FL1, s, x0);
  const auto b = solve(ObjectiveKind::FL1, s, x0);
  CHECK(a.final_point.flat() == b.final_point.flat());
  CHECK(a.iterations == b.iterations);
  CHECK(a.function_evals == b.function_evals);
}

TEST_CASE("both damping scales reach the global minimum from nearby starts") {
  Rng rng(9);
  for (auto scale : {DampingScale::Identity, DampingScale::JacobianDiagonal}) {
    SolverSettings settings;
    settings.damping_scale = scale;
    for (int t = 0; t < 30; ++t) {
      GeneratorConfig cfg;
      const auto s = random_scenario(cfg, rng);
      Position start = s.ground_truth();
      start[0] += 0.05;
      start[1] -= 0.05;
      for (auto k : {ObjectiveKind::F1, ObjectiveKind::F2}) {
        const auto r = solve(k, s, ParameterVector(start), settings);
        CHECK((r.final_point.position - s.ground_truth()).norm() < 1e-3);
      }
    }
  }
}

TEST_CASE("termination names") {
  CHECK(to_string(Termination::FTol) == "FTol");
  CHECK(to_string(Termination::XTol) == "XTol");
  CHECK(to_string(Termination::Optimality) == "Optimality");
  CHECK(to_string(Termination::MaxIter) == "MaxIter");
  CHECK(to_string(Termination::MaxFeval) == "MaxFeval");
}
