#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/filtration.hpp"
#include "phkit/geometry/delaunay.hpp"
#include "phkit/geometry/orthosphere.hpp"
#include "phkit/geometry/point_cloud.hpp"
#include "phkit/simplex.hpp"

namespace phkit {

struct AlphaOptions {
  /// Values closer than this relative gap are merged to the smaller one.
  /// Removes zero-length pairs produced by rounding on symmetric inputs.
  /// 0 disables snapping.
  double snap_tolerance = 1e-10;
};

/// Construction report for weighted alpha filtrations.
struct AlphaSummary {
  std::size_t num_points = 0;
  std::size_t num_cells = 0;
  /// Points whose power cell is empty; they are not vertices of the complex.
  std::vector<std::uint32_t> hidden_points;
};

namespace detail {

using Cell4 = std::array<std::uint32_t, 4>;
inline constexpr std::uint32_t kPad = std::numeric_limits<std::uint32_t>::max();

template <int D>
std::vector<Cell4> delaunay_cells(const PointCloud& pc, bool weighted,
                                  std::vector<std::uint32_t>* hidden) {
  geometry::Triangulation<D> tri(pc.coords(), weighted ? pc.weights() : std::span<const double>{});
  std::vector<Cell4> out;
  auto cells = tri.finite_cells();
  out.reserve(cells.size());
  for (const auto& c : cells) {
    Cell4 a;
    a.fill(kPad);
    std::copy(c.begin(), c.end(), a.begin());
    out.push_back(a);
  }
  if (hidden) *hidden = tri.hidden_points();
  return out;
}

inline std::vector<Cell4> faces_of(const std::vector<Cell4>& level, int k) {
  std::vector<Cell4> out;
  out.reserve(level.size() * static_cast<std::size_t>(k + 1));
  for (const auto& c : level)
    for (int drop = 0; drop <= k; ++drop) {
      Cell4 f;
      f.fill(kPad);
      for (int i = 0, j = 0; i <= k; ++i)
        if (i != drop) f[j++] = c[i];
      out.push_back(f);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Monotone map sending each cluster of nearly equal values to its minimum.
inline void snap_values(std::vector<std::vector<double>>& levels, double tol) {
  if (tol <= 0) return;
  std::vector<double> all;
  for (const auto& l : levels) all.insert(all.end(), l.begin(), l.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() < 2) return;
  std::vector<double> rep(all.size());
  rep[0] = all[0];
  for (std::size_t i = 1; i < all.size(); ++i) {
    const double gap = all[i] - all[i - 1];
    const double mag = std::max(std::abs(all[i]), std::abs(all[i - 1]));
    rep[i] = gap <= tol * mag ? rep[i - 1] : all[i];
  }
  for (auto& l : levels)
    for (double& v : l) {
      auto it = std::lower_bound(all.begin(), all.end(), v);
      v = rep[static_cast<std::size_t>(it - all.begin())];
    }
}

template <int D>
Filtration alpha_from_cells(const PointCloud& pc, bool weighted, std::vector<Cell4> top,
                            const AlphaOptions& opt) {
  std::vector<std::vector<Cell4>> levels(D + 1);
  levels[D] = std::move(top);
  for (int k = D; k > 0; --k) levels[k - 1] = faces_of(levels[k], k);

  auto wt = [&](std::uint32_t v) { return weighted ? pc.weight(v) : 0.0; };
  std::vector<std::vector<double>> values(D + 1);
  std::vector<geometry::Orthosphere<D>> spheres;
  std::vector<Cell4>* above = nullptr;

  for (int k = D; k >= 0; --k) {
    auto& level = levels[k];
    spheres.resize(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
      std::array<const double*, D + 1> p{};
      std::array<double, D + 1> w{};
      for (int j = 0; j <= k; ++j) {
        p[j] = pc.point(level[i][j]).data();
        w[j] = wt(level[i][j]);
      }
      spheres[i] = geometry::orthosphere<D>(p, w, k);
    }
    auto& val = values[k];
    val.assign(level.size(), std::numeric_limits<double>::infinity());
    std::vector<char> attached(level.size(), 0);
    if (above) {
      const auto& up = *above;
      const auto& upval = values[k + 1];
      for (std::size_t t = 0; t < up.size(); ++t) {
        for (int drop = 0; drop <= k + 1; ++drop) {
          Cell4 f;
          f.fill(kPad);
          for (int i = 0, j = 0; i <= k + 1; ++i)
            if (i != drop) f[j++] = up[t][i];
          const auto idx =
              static_cast<std::size_t>(std::lower_bound(level.begin(), level.end(), f) - level.begin());
          val[idx] = std::min(val[idx], upval[t]);
          if (attached[idx]) continue;
          const std::uint32_t v = up[t][drop];
          const auto x = pc.point(v);
          const auto& s = spheres[idx];
          double d2 = 0.0;
          for (int c = 0; c < D; ++c) d2 += (x[c] - s.center[c]) * (x[c] - s.center[c]);
          if (d2 - wt(v) - s.radius2 < 0.0) attached[idx] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < level.size(); ++i)
      if (!attached[i]) val[i] = std::min(val[i], spheres[i].radius2);
    above = &level;
  }
  snap_values(values, opt.snap_tolerance);

  SimplicialFiltrationBuilder b;
  std::size_t cells = 0, entries = 0;
  for (int k = 0; k <= D; ++k) {
    cells += levels[k].size();
    entries += levels[k].size() * static_cast<std::size_t>(k + 1);
  }
  b.reserve(cells, entries);
  for (int k = 0; k <= D; ++k) {
    for (std::size_t i = 0; i < levels[k].size(); ++i)
      b.add(std::span<const std::uint32_t>(levels[k][i].data(), static_cast<std::size_t>(k + 1)),
            values[k][i]);
    std::vector<Cell4>().swap(levels[k]);
    std::vector<double>().swap(values[k]);
  }
  return std::move(b).build();
}

inline Filtration alpha_dispatch(const PointCloud& pc, bool weighted, AlphaSummary* summary,
                                 const AlphaOptions& opt) {
  std::vector<std::uint32_t> hidden;
  Filtration f = pc.dimension() == 2
                     ? alpha_from_cells<2>(pc, weighted, delaunay_cells<2>(pc, weighted, &hidden), opt)
                     : alpha_from_cells<3>(pc, weighted, delaunay_cells<3>(pc, weighted, &hidden), opt);
  if (summary) {
    summary->num_points = pc.size();
    summary->num_cells = f.size();
    summary->hidden_points = std::move(hidden);
  }
  return f;
}

}  // namespace detail

/// Delaunay triangulation of the (unweighted) points as a simplicial complex on
/// point indices.
inline SimplicialComplex delaunay(const PointCloud& pc) {
  std::vector<detail::Cell4> cells = pc.dimension() == 2 ? detail::delaunay_cells<2>(pc, false, nullptr)
                                                         : detail::delaunay_cells<3>(pc, false, nullptr);
  std::vector<Simplex> tops;
  tops.reserve(cells.size());
  for (const auto& c : cells)
    tops.emplace_back(std::vector<Vertex>(c.begin(), c.begin() + pc.dimension() + 1));
  return make_complex(tops);
}

/// Alpha filtration with squared radii as values. Weights, if any, are ignored.
inline Filtration alpha_filtration(const PointCloud& pc, const AlphaOptions& opt = {}) {
  return detail::alpha_dispatch(pc, false, nullptr, opt);
}

/// Weighted alpha filtration; weights are squared ball radii and values are
/// power-distance radii (vertex i enters at -w_i).
inline Filtration weighted_alpha_filtration(const PointCloud& pc, AlphaSummary* summary = nullptr,
                                            const AlphaOptions& opt = {}) {
  if (!pc.weighted()) throw InvalidInput("weighted alpha filtration needs per-point weights");
  return detail::alpha_dispatch(pc, true, summary, opt);
}

/// Converts a squared alpha value to a radius, keeping the sign of negative values.
inline double unsquare(double v) {
  if (std::isinf(v)) return v;
  return v >= 0 ? std::sqrt(v) : -std::sqrt(-v);
}

}  // namespace phkit
