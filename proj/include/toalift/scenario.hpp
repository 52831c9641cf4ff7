#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "toalift/geometry.hpp"
#include "toalift/objectives.hpp"

namespace toalift {

/// Seeded source for every random draw in the library. The engine is
/// std::mt19937_64, whose output sequence is fixed by the C++ standard; reals are
/// built from the top 53 bits so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream for item `index` of a campaign seeded with `seed`.
  static Rng for_stream(std::uint64_t seed, std::uint64_t index);

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorConfig {
  int dim = 2;
  int n_stations = 4;
  double cube_side = 10.0;
  double min_normalized_sv = 0.1;
  CollinearityMeasure gate_measure = CollinearityMeasure::CoordinateSpread;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Stations and target uniform in [0, cube_side]^dim. Constellations failing
/// the collinearity gate are redrawn, as are targets within 1e-6 of a station.
/// Throws GenerationFailure after 10,000 consecutive rejections.
Scenario random_scenario(const GeneratorConfig& config, Rng& rng);
/// Convenience overload drawing from Rng(config.seed).
Scenario random_scenario(const GeneratorConfig& config);

/// Start point uniform in the cube; lambda = 1 for lifted kinds.
ParameterVector random_initial(const GeneratorConfig& config, Rng& rng, ObjectiveKind kind);
Position random_position(const GeneratorConfig& config, Rng& rng);

/// Constellation with a planted F2 local minimum at the origin and the target
/// at (x_g, 0): s1 stations at the origin and s2 stations at (x_g / 2, b_k).
struct PlantedExampleConfig {
  double x_g = 1.0;
  int s1 = 1;
  int s2 = 3;
  std::vector<double> b_values{-2.0, 1.0, 3.0};
};

/// Throws ContractViolation naming the violated condition:
///   1: 3 * sum(a_i) > N * x_g
///   2: 0.5 * s2 > s1
///   3: 2 * sum(b_k^2) > x_g^2 * s1
/// plus a positive determinant of the F2 position Hessian at the origin.
Scenario planted_example(const PlantedExampleConfig& config);

}  // namespace toalift
