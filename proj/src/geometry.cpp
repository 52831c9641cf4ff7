#include "toalift/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "toalift/errors.hpp"

namespace toalift {

Constellation::Constellation(Eigen::MatrixXd stations) : stations_(std::move(stations)) {
  require(stations_.rows() >= 1, "constellation needs at least one station");
  require(stations_.cols() == 2 || stations_.cols() == 3,
          "station coordinates must be 2-D or 3-D, got " + std::to_string(stations_.cols()));
  require(stations_.allFinite(), "station coordinates must be finite");
}

Constellation Constellation::from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), "constellation needs at least one station");
  const auto dim = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == dim, "all stations must share one dimension");
    for (std::size_t k = 0; k < dim; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return Constellation(std::move(m));
}

Scenario::Scenario(Constellation constellation, Position ground_truth)
    : constellation_(std::move(constellation)), ground_truth_(std::move(ground_truth)) {
  require(ground_truth_.allFinite(), "ground truth must be finite");
  distances_ = compute_distances(constellation_, ground_truth_);
}

DistanceSet compute_distances(const Constellation& constellation, const Position& target) {
  require(target.size() == constellation.dim(),
          "target dimension " + std::to_string(target.size()) + " does not match station dimension " +
              std::to_string(constellation.dim()));
  const auto& a = constellation.matrix();
  DistanceSet d(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) d(i) = (target - a.row(i).transpose()).norm();
  return d;
}

std::vector<double> collinearity_singular_values(const Constellation& constellation) {
  require(constellation.size() >= 2, "collinearity check needs at least two stations");
  const auto& a = constellation.matrix();
  const Eigen::MatrixXd centered = a.rowwise() - a.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(a.rows());

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov);
  const Eigen::VectorXd sv = svd.singularValues();  // already descending
  std::vector<double> out(static_cast<std::size_t>(sv.size()), 0.0);
  if (sv(0) <= 0.0) return out;
  for (Eigen::Index k = 0; k < sv.size(); ++k) out[static_cast<std::size_t>(k)] = sv(k) / sv(0);
  out[0] = 1.0;
  return out;
}

std::vector<double> spread_singular_values(const Constellation& constellation) {
  auto sv = collinearity_singular_values(constellation);
  for (double& s : sv) s = std::sqrt(s);
  return sv;
}

std::vector<double> normalized_singular_values(const Constellation& constellation, CollinearityMeasure measure) {
  return measure == CollinearityMeasure::CoordinateSpread ? spread_singular_values(constellation)
                                                          : collinearity_singular_values(constellation);
}

bool passes_collinearity_gate(const Constellation& constellation, double threshold, CollinearityMeasure measure) {
  const auto sv = normalized_singular_values(constellation, measure);
  return std::all_of(sv.begin(), sv.end(), [threshold](double s) { return s > threshold; });
}

}  // namespace toalift
