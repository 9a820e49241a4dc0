#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/parallel.hpp"
#include "phkit/persistence.hpp"

namespace phkit {

struct ImageParams {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 16;
  /// Gaussian standard deviation in birth/death units; one bin width if unset.
  std::optional<double> sigma;
  /// Persistence at which the weight saturates at 1; hi - lo if unset.
  std::optional<double> w_max;
};

/// Row-major image with the birth axis fastest: values[death_bin * bins + birth_bin].
struct PersistenceImage {
  ImageParams params;
  std::vector<double> values;
};

/// Resolves defaults and checks the parameters.
inline ImageParams resolve_image_params(ImageParams p) {
  if (p.bins < 1) throw BadParams("persistence image needs at least one bin");
  if (!(p.lo < p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi)) throw BadParams("image range needs lo < hi");
  if (!p.sigma) p.sigma = (p.hi - p.lo) / static_cast<double>(p.bins);
  if (!p.w_max) p.w_max = p.hi - p.lo;
  if (!(*p.sigma > 0) || !std::isfinite(*p.sigma)) throw BadParams("sigma must be positive");
  if (!(*p.w_max > 0) || !std::isfinite(*p.w_max)) throw BadParams("w_max must be positive");
  return p;
}

/// Linear ramp weight min(persistence / w_max, 1).
inline double image_weight(const DiagramPoint& p, double w_max) {
  return std::clamp((p.death - p.birth) / w_max, 0.0, 1.0);
}

/// Sum over finite points of weight * Gaussian density at each bin center,
/// times the bin area, so an interior point contributes about its weight in total.
/// Essential points are skipped.
inline PersistenceImage persistence_image(const PersistenceDiagram& pd, const ImageParams& params) {
  const ImageParams p = resolve_image_params(params);
  std::vector<DiagramPoint> pts = pd.finite();
  std::sort(pts.begin(), pts.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  });
  const std::size_t n = p.bins;
  const double width = (p.hi - p.lo) / static_cast<double>(n);
  const double norm = width * width / (2.0 * std::numbers::pi * *p.sigma * *p.sigma);
  const double inv2s2 = 1.0 / (2.0 * *p.sigma * *p.sigma);
  std::vector<double> w(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) w[k] = image_weight(pts[k], *p.w_max);

  PersistenceImage img;
  img.params = p;
  img.values.assign(n * n, 0.0);
  parallel_for(n, [&](std::size_t row) {
    const double cy = p.lo + (static_cast<double>(row) + 0.5) * width;
    for (std::size_t col = 0; col < n; ++col) {
      const double cx = p.lo + (static_cast<double>(col) + 0.5) * width;
      double s = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double dx = cx - pts[k].birth, dy = cy - pts[k].death;
        s += w[k] * std::exp(-(dx * dx + dy * dy) * inv2s2);
      }
      img.values[row * n + col] = s * norm;
    }
  });
  return img;
}

}  // namespace phkit
