#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/persistence.hpp"

namespace phkit {

/// Square 2D histogram of finite diagram points over [lo, hi] on both axes.
/// Bins are half-open [edge_k, edge_k+1) except the last, which is closed.
struct DiagramHistogram {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 1;
  /// Row-major with the birth axis fastest: counts[death_bin * bins + birth_bin].
  std::vector<double> counts;
  std::size_t overflow = 0;   // finite points outside the range
  std::size_t essential = 0;  // points with infinite death

  double count(std::size_t birth_bin, std::size_t death_bin) const { return counts[death_bin * bins + birth_bin]; }
  double bin_width() const { return (hi - lo) / static_cast<double>(bins); }
  double edge(std::size_t k) const { return k == bins ? hi : lo + bin_width() * static_cast<double>(k); }
  double total() const {
    double s = 0;
    for (double c : counts) s += c;
    return s;
  }

  /// Bin holding x, or nullopt when x lies outside [lo, hi].
  std::optional<std::size_t> bin_of(double x) const {
    if (!(x >= lo && x <= hi)) return std::nullopt;
    if (x == hi) return bins - 1;
    auto k = static_cast<std::size_t>(std::floor((x - lo) / (hi - lo) * static_cast<double>(bins)));
    if (k >= bins) k = bins - 1;
    // Guard the floor against rounding at interior edges.
    while (k > 0 && x < edge(k)) --k;
    while (k + 1 < bins && x >= edge(k + 1)) ++k;
    return k;
  }
};

inline DiagramHistogram histogram(const PersistenceDiagram& pd, double lo, double hi, std::size_t bins) {
  if (bins < 1) throw BadRange("histogram needs at least one bin");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw BadRange("histogram range needs lo < hi");
  DiagramHistogram h;
  h.lo = lo;
  h.hi = hi;
  h.bins = bins;
  h.counts.assign(bins * bins, 0.0);
  for (const auto& p : pd.points) {
    if (p.essential()) {
      ++h.essential;
      continue;
    }
    auto bb = h.bin_of(p.birth), db = h.bin_of(p.death);
    if (!bb || !db) {
      ++h.overflow;
      continue;
    }
    h.counts[*db * bins + *bb] += 1.0;
  }
  return h;
}

}  // namespace phkit
