#include "toalift/scenario.hpp"

#include <string>

#include "toalift/errors.hpp"

namespace toalift {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr int kMaxRejections = 10000;
constexpr double kMinTargetStationGap = 1e-6;

}  // namespace

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ index));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

void GeneratorConfig::validate() const {
  require(dim == 2 || dim == 3, "dim must be 2 or 3");
  require(n_stations >= dim + 1, "n_stations must be at least dim + 1");
  require(cube_side > 0.0, "cube_side must be positive");
  require(min_normalized_sv >= 0.0 && min_normalized_sv < 1.0, "min_normalized_sv must lie in [0, 1)");
}

Position random_position(const GeneratorConfig& config, Rng& rng) {
  Position p(config.dim);
  for (int k = 0; k < config.dim; ++k) p(k) = rng.uniform(0.0, config.cube_side);
  return p;
}

Scenario random_scenario(const GeneratorConfig& config, Rng& rng) {
  config.validate();
  int rejections = 0;
  Eigen::MatrixXd stations(config.n_stations, config.dim);
  while (true) {
    for (int i = 0; i < config.n_stations; ++i) stations.row(i) = random_position(config, rng).transpose();
    if (passes_collinearity_gate(Constellation(stations), config.min_normalized_sv, config.gate_measure)) break;
    if (++rejections >= kMaxRejections)
      throw GenerationFailure("no constellation passed the collinearity gate after " +
                              std::to_string(kMaxRejections) + " draws");
  }
  rejections = 0;
  while (true) {
    Position target = random_position(config, rng);
    const Eigen::VectorXd gaps = (stations.rowwise() - target.transpose()).rowwise().norm();
    if (gaps.minCoeff() > kMinTargetStationGap) return Scenario(Constellation(stations), std::move(target));
    if (++rejections >= kMaxRejections)
      throw GenerationFailure("could not place a target away from the stations");
  }
}

Scenario random_scenario(const GeneratorConfig& config) {
  Rng rng(config.seed);
  return random_scenario(config, rng);
}

ParameterVector random_initial(const GeneratorConfig& config, Rng& rng, ObjectiveKind kind) {
  Position p = random_position(config, rng);
  return is_lifted(kind) ? ParameterVector(std::move(p), 1.0) : ParameterVector(std::move(p));
}

Scenario planted_example(const PlantedExampleConfig& config) {
  require(config.x_g > 0.0, "planted example needs x_g > 0");
  require(config.s1 >= 0 && config.s2 >= 1, "planted example needs s1 >= 0 and s2 >= 1");
  require(static_cast<int>(config.b_values.size()) == config.s2, "b_values must have exactly s2 entries");

  const int n = config.s1 + config.s2;
  const double sum_a = 0.5 * config.x_g * config.s2;
  double sum_b_sq = 0.0;
  for (double b : config.b_values) sum_b_sq += b * b;

  require(0.5 * config.s2 > config.s1, "planted example violates condition 2: 0.5 * S2 > S1");
  require(3.0 * sum_a > n * config.x_g, "planted example violates condition 1: 3 * sum(a_i) > N * x_G");
  require(2.0 * sum_b_sq > config.x_g * config.x_g * config.s1,
          "planted example violates condition 3: 2 * sum(b_i^2) > x_G^2 * S1");

  // F2 Hessian at the origin: [[hxx, hxy], [hxy, hyy]].
  double sum_b = 0.0;
  for (double b : config.b_values) sum_b += b;
  const double xg2 = config.x_g * config.x_g;
  const double hxx = xg2 * (0.5 * config.s2 - config.s1);
  const double hyy = 2.0 * sum_b_sq - xg2 * config.s1;
  const double hxy = config.x_g * sum_b;
  require(hxx * hyy > hxy * hxy,
          "planted example violates the curvature determinant condition: the origin would be a saddle of F2");

  Eigen::MatrixXd stations = Eigen::MatrixXd::Zero(n, 2);
  for (int k = 0; k < config.s2; ++k) {
    stations(config.s1 + k, 0) = 0.5 * config.x_g;
    stations(config.s1 + k, 1) = config.b_values[static_cast<std::size_t>(k)];
  }
  Position target(2);
  target << config.x_g, 0.0;
  return Scenario(Constellation(std::move(stations)), std::move(target));
}

}  // namespace toalift
