#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phkit/error.hpp"

namespace phkit {

/// Points in the plane or in space, stored as a flat coordinate array, with
/// optional per-point weights (squared radii).
class PointCloud {
 public:
  PointCloud() = default;

  PointCloud(int dimension, std::vector<double> coords, std::vector<double> weights = {})
      : dim_(dimension), coords_(std::move(coords)), weights_(std::move(weights)) {
    if (dim_ != 2 && dim_ != 3) throw InvalidInput("point clouds must be 2- or 3-dimensional");
    if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
      throw InvalidInput("coordinate count is not a multiple of the dimension");
    for (double x : coords_)
      if (!std::isfinite(x)) throw InvalidInput("point coordinates must be finite");
    if (!weights_.empty() && weights_.size() != size())
      throw InvalidInput("expected one weight per point, got " + std::to_string(weights_.size()));
    for (double w : weights_)
      if (!std::isfinite(w)) throw InvalidInput("weights must be finite");
  }

  /// Builds a cloud from coordinate rows, which must all have the same length.
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows,
                              std::vector<double> weights = {}) {
    if (rows.empty()) throw InvalidInput("empty point cloud");
    const int d = static_cast<int>(rows.front().size());
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != d) throw InvalidInput("points have mixed dimensions");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointCloud(d, std::move(flat), std::move(weights));
  }

  int dimension() const { return dim_; }
  std::size_t size() const { return dim_ ? coords_.size() / static_cast<std::size_t>(dim_) : 0; }
  bool weighted() const { return !weights_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return weights_.empty() ? 0.0 : weights_[i]; }

  std::span<const double> coords() const { return coords_; }
  std::span<const double> weights() const { return weights_; }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

}  // namespace phkit
