#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

namespace toalift {

/// A point in 2-D or 3-D model space.
using Position = Eigen::VectorXd;

/// One non-negative range per station, in station order.
using DistanceSet = Eigen::VectorXd;

/// Ordered set of base stations, stored one station per row.
class Constellation {
 public:
  Constellation() = default;
  /// Rows are stations. Throws ContractViolation unless dim is 2 or 3, there is
  /// at least one station and every coordinate is finite.
  explicit Constellation(Eigen::MatrixXd stations);
  static Constellation from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return static_cast<std::size_t>(stations_.rows()); }
  int dim() const { return static_cast<int>(stations_.cols()); }
  Position station(std::size_t i) const { return stations_.row(static_cast<Eigen::Index>(i)).transpose(); }
  const Eigen::MatrixXd& matrix() const { return stations_; }
  Position centroid() const { return stations_.colwise().mean().transpose(); }

 private:
  Eigen::MatrixXd stations_;
};

/// Errorless ranging problem: the distances are always derived from the
/// ground truth, never supplied independently.
class Scenario {
 public:
  Scenario(Constellation constellation, Position ground_truth);

  const Constellation& constellation() const { return constellation_; }
  const Position& ground_truth() const { return ground_truth_; }
  const DistanceSet& distances() const { return distances_; }
  std::size_t size() const { return constellation_.size(); }
  int dim() const { return constellation_.dim(); }

 private:
  Constellation constellation_;
  Position ground_truth_;
  DistanceSet distances_;
};

DistanceSet compute_distances(const Constellation& constellation, const Position& target);

/// Singular values of the (biased) station covariance matrix divided by the
/// largest one, sorted descending. All zeros when the stations coincide.
std::vector<double> collinearity_singular_values(const Constellation& constellation);

/// Singular values of the centred station coordinate matrix divided by the
/// largest one: the element-wise square root of collinearity_singular_values().
std::vector<double> spread_singular_values(const Constellation& constellation);

/// Which normalized spectrum the collinearity gate thresholds.
enum class CollinearityMeasure {
  CoordinateSpread,    ///< spread_singular_values (default, standard-deviation scale)
  CovarianceSpectrum,  ///< collinearity_singular_values (variance scale)
};

std::vector<double> normalized_singular_values(const Constellation& constellation, CollinearityMeasure measure);

/// True when every normalized singular value exceeds `threshold`.
bool passes_collinearity_gate(const Constellation& constellation, double threshold,
                              CollinearityMeasure measure = CollinearityMeasure::CoordinateSpread);

}  // namespace toalift
