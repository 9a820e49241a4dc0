#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "phkit/cubical.hpp"
#include "phkit/error.hpp"
#include "phkit/parallel.hpp"

namespace phkit {

namespace detail {

/// Lower envelope of parabolas: d[q] = min_p (q - p)^2 + f[p] along one line.
inline void edt_1d(const double* f, double* d, std::size_t n, std::size_t* v, double* z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::size_t k = 0, first = 0;
  while (first < n && std::isinf(f[first])) ++first;
  if (first == n) {
    for (std::size_t q = 0; q < n; ++q) d[q] = inf;
    return;
  }
  v[0] = first;
  z[0] = -inf;
  z[1] = inf;
  for (std::size_t q = first + 1; q < n; ++q) {
    if (std::isinf(f[q])) continue;
    const double fq = f[q] + double(q) * double(q);
    double s;
    while (true) {
      const double p = double(v[k]);
      s = (fq - (f[v[k]] + p * p)) / (2.0 * (double(q) - p));
      if (s > z[k]) break;  // z[0] is -inf, so this stops at k == 0
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (z[k + 1] < double(q)) ++k;
    const double t = double(q) - double(v[k]);
    d[q] = t * t + f[v[k]];
  }
}

/// Squared Euclidean distance from every voxel to the nearest voxel where
/// `seed` is true, by one 1D pass per axis.
inline std::vector<double> squared_edt(const std::vector<std::size_t>& shape, const std::vector<char>& seed) {
  const std::size_t r = shape.size();
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  std::vector<double> g(total);
  for (std::size_t i = 0; i < total; ++i) g[i] = seed[i] ? 0.0 : std::numeric_limits<double>::infinity();
  std::vector<std::size_t> stride(r);
  std::size_t s = 1;
  for (std::size_t k = r; k-- > 0;) {
    stride[k] = s;
    s *= shape[k];
  }
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t n = shape[k], st = stride[k];
    const std::size_t lines = total / n;
    parallel_for(lines, [&](std::size_t line) {
      // Decompose the line number into the base offset with axis k at 0.
      const std::size_t outer = line / st, inner = line % st;
      const std::size_t base = outer * n * st + inner;
      std::vector<double> f(n), d(n), z(n + 1);
      std::vector<std::size_t> v(n);
      for (std::size_t q = 0; q < n; ++q) f[q] = g[base + q * st];
      edt_1d(f.data(), d.data(), n, v.data(), z.data());
      for (std::size_t q = 0; q < n; ++q) g[base + q * st] = d[q];
    });
  }
  return g;
}

}  // namespace detail

/// Signed Euclidean distance map of a binary bitmap: foreground voxels get
/// minus the distance to the nearest background voxel center, background
/// voxels plus the distance to the nearest foreground one. `positive_inside`
/// flips the sign.
inline GrayBitmap distance_transform(const BinaryBitmap& b, bool positive_inside = false) {
  std::vector<char> fg(b.size()), bg(b.size());
  bool any_fg = false, any_bg = false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    fg[i] = b.values[i] != 0;
    bg[i] = !fg[i];
    any_fg |= fg[i] != 0;
    any_bg |= bg[i] != 0;
  }
  if (!any_fg || !any_bg) throw UniformBitmap();
  const auto to_bg = detail::squared_edt(b.shape, bg);
  const auto to_fg = detail::squared_edt(b.shape, fg);
  std::vector<double> out(b.size());
  const double sign = positive_inside ? -1.0 : 1.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    out[i] = fg[i] ? -sign * std::sqrt(to_bg[i]) : sign * std::sqrt(to_fg[i]);
  return GrayBitmap(b.shape, std::move(out));
}

}  // namespace phkit
