#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/filtration.hpp"

namespace phkit {

struct PersistenceOptions {
  /// Skip columns already known to be births (the "twist" optimization).
  bool clearing = true;
  /// Pair edges with vertices by union-find instead of column reduction.
  bool union_find = true;
  /// Record column operations so that essential classes get explicit cycles.
  bool track_essential_cycles = false;
};

/// One point of a persistence diagram with the cells that created it.
struct DiagramPoint {
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  Index birth_cell = kNoIndex;
  Index death_cell = kNoIndex;

  bool essential() const { return std::isinf(death); }
  double persistence() const { return death - birth; }
};

struct PersistenceDiagram {
  int degree = 0;
  std::vector<DiagramPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  std::vector<DiagramPoint> finite() const {
    std::vector<DiagramPoint> out;
    for (const auto& p : points)
      if (!p.essential()) out.push_back(p);
    return out;
  }
  std::vector<double> essential_births() const {
    std::vector<double> out;
    for (const auto& p : points)
      if (p.essential()) out.push_back(p.birth);
    return out;
  }
};

/// Index-level result of the reduction: every cell is a birth, a death or
/// essential. Keeps the reduced death columns for cycle extraction.
///
/// Holds a pointer to the filtration it was computed from, which must outlive it.
class PersistencePairing {
 public:
  struct Pair {
    Index birth;
    Index death;
  };

  const Filtration& filtration() const { return *f_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  const std::vector<Index>& essential() const { return essential_; }

  /// Partner of a cell, or kNoIndex when essential.
  Index partner(Index i) const { return partner_[i]; }
  bool is_birth(Index i) const { return partner_[i] == kNoIndex || partner_[i] > i; }

  /// Reduced column of a death cell (ascending row indices); empty otherwise
  /// or when the column was paired by union-find.
  std::span<const Index> reduced_column(Index j) const {
    if (col_start_.empty() || col_start_[j] == kNoOffset) return {};
    return {pool_.data() + col_start_[j], col_len_[j]};
  }

  /// Column of the death cell whose reduced column ends at `row`.
  Index pivot_column(Index row) const { return row < pivot_.size() ? pivot_[row] : kNoIndex; }

  /// Chain of cells whose sum is the cycle born at an essential cell, when
  /// essential cycles were tracked.
  std::span<const Index> essential_cycle(Index i) const {
    if (v_start_.empty() || v_start_[i] == kNoOffset) return {};
    return {v_pool_.data() + v_start_[i], v_len_[i]};
  }
  bool tracks_essential_cycles() const { return !v_start_.empty(); }

 private:
  friend class Reducer;
  static constexpr std::uint64_t kNoOffset = std::numeric_limits<std::uint64_t>::max();

  const Filtration* f_ = nullptr;
  std::vector<Pair> pairs_;
  std::vector<Index> essential_;
  std::vector<Index> partner_;
  std::vector<Index> pivot_;
  std::vector<Index> pool_;
  std::vector<std::uint64_t> col_start_;
  std::vector<std::uint32_t> col_len_;
  std::vector<Index> v_pool_;
  std::vector<std::uint64_t> v_start_;
  std::vector<std::uint32_t> v_len_;
};

struct PersistenceResult {
  PersistencePairing pairing;
  /// Diagrams for degrees 0 .. max dimension of the filtration.
  std::vector<PersistenceDiagram> diagrams;

  const PersistenceDiagram& diagram(int degree) const {
    if (degree < 0 || degree >= static_cast<int>(diagrams.size())) throw BadDegree(degree);
    return diagrams[static_cast<std::size_t>(degree)];
  }
};

namespace detail {

/// a <- a xor b for sorted index lists; `tmp` is scratch space.
inline void add_columns(std::vector<Index>& a, std::span<const Index> b, std::vector<Index>& tmp) {
  tmp.clear();
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) tmp.push_back(*i++);
    else if (*j < *i) tmp.push_back(*j++);
    else {
      ++i;
      ++j;
    }
  }
  tmp.insert(tmp.end(), i, a.end());
  tmp.insert(tmp.end(), j, b.end());
  a.swap(tmp);
}

}  // namespace detail

class Reducer {
 public:
  Reducer(const Filtration& f, const PersistenceOptions& opt) : f_(f), opt_(opt) {}

  PersistencePairing run() {
    const Index n = static_cast<Index>(f_.size());
    PersistencePairing p;
    p.f_ = &f_;
    p.partner_.assign(n, kNoIndex);
    p.pivot_.assign(n, kNoIndex);
    p.col_start_.assign(n, PersistencePairing::kNoOffset);
    p.col_len_.assign(n, 0);
    if (opt_.track_essential_cycles) {
      p.v_start_.assign(n, PersistencePairing::kNoOffset);
      p.v_len_.assign(n, 0);
    }
    const bool uf = opt_.union_find && !opt_.track_essential_cycles;

    std::vector<std::vector<Index>> by_dim(static_cast<std::size_t>(std::max(0, f_.max_dimension() + 1)));
    for (Index j = 0; j < n; ++j) by_dim[f_.dimension(j)].push_back(j);

    std::vector<char> cleared(n, 0);
    std::vector<Index> col, tmp, v, vtmp;
    for (int d = f_.max_dimension(); d >= 1; --d) {
      if (d == 1 && uf) {
        union_find_edges(p, by_dim[1]);
        continue;
      }
      // V columns of this dimension, kept only while reducing it.
      std::vector<std::uint64_t> vs;
      std::vector<std::uint32_t> vl;
      std::vector<Index> vpool;
      if (opt_.track_essential_cycles) {
        vs.assign(n, PersistencePairing::kNoOffset);
        vl.assign(n, 0);
      }
      for (Index j : by_dim[static_cast<std::size_t>(d)]) {
        if (opt_.clearing && cleared[j]) continue;
        auto bd = f_.boundary(j);
        col.assign(bd.begin(), bd.end());
        if (opt_.track_essential_cycles) v.assign(1, j);
        while (!col.empty()) {
          const Index k = p.pivot_[col.back()];
          if (k == kNoIndex) break;
          detail::add_columns(col, p.reduced_column(k), tmp);
          if (opt_.track_essential_cycles)
            detail::add_columns(v, std::span<const Index>(vpool.data() + vs[k], vl[k]), vtmp);
        }
        if (opt_.track_essential_cycles) {
          vs[j] = vpool.size();
          vl[j] = static_cast<std::uint32_t>(v.size());
          vpool.insert(vpool.end(), v.begin(), v.end());
        }
        if (col.empty()) continue;
        const Index low = col.back();
        p.pivot_[low] = j;
        p.partner_[low] = j;
        p.partner_[j] = low;
        p.col_start_[j] = p.pool_.size();
        p.col_len_[j] = static_cast<std::uint32_t>(col.size());
        p.pool_.insert(p.pool_.end(), col.begin(), col.end());
        if (opt_.clearing) cleared[low] = 1;
      }
      if (opt_.track_essential_cycles) {
        // Keep the V columns of cells that stay unpaired.
        for (Index j : by_dim[static_cast<std::size_t>(d)]) {
          if (vs[j] == PersistencePairing::kNoOffset || p.col_start_[j] != PersistencePairing::kNoOffset)
            continue;
          p.v_start_[j] = p.v_pool_.size();
          p.v_len_[j] = vl[j];
          p.v_pool_.insert(p.v_pool_.end(), vpool.begin() + static_cast<std::ptrdiff_t>(vs[j]),
                           vpool.begin() + static_cast<std::ptrdiff_t>(vs[j] + vl[j]));
        }
      }
    }

    for (Index j = 0; j < n; ++j) {
      if (p.partner_[j] == kNoIndex) {
        p.essential_.push_back(j);
        if (opt_.track_essential_cycles && f_.dimension(j) == 0) {
          p.v_start_[j] = p.v_pool_.size();
          p.v_len_[j] = 1;
          p.v_pool_.push_back(j);
        }
      } else if (p.partner_[j] > j) {
        p.pairs_.push_back({j, p.partner_[j]});
      }
    }
    return p;
  }

 private:
  // Elder rule: an edge joining two components kills the younger one.
  void union_find_edges(PersistencePairing& p, const std::vector<Index>& edges) {
    const Index n = static_cast<Index>(f_.size());
    std::vector<Index> parent(n);
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    // Roots are kept at the oldest vertex of their component.
    for (Index e : edges) {
      if (opt_.clearing && p.partner_[e] != kNoIndex) continue;
      auto bd = f_.boundary(e);
      Index a = find(bd[0]), b = find(bd[1]);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      parent[b] = a;
      p.partner_[b] = e;
      p.partner_[e] = b;
      p.pivot_[b] = e;
    }
  }

  const Filtration& f_;
  PersistenceOptions opt_;
};

inline std::vector<PersistenceDiagram> diagrams_from_pairing(const PersistencePairing& p) {
  const Filtration& f = p.filtration();
  std::vector<PersistenceDiagram> out(static_cast<std::size_t>(std::max(0, f.max_dimension() + 1)));
  for (std::size_t k = 0; k < out.size(); ++k) out[k].degree = static_cast<int>(k);
  for (const auto& [b, d] : p.pairs()) {
    if (f.value(b) == f.value(d)) continue;
    out[static_cast<std::size_t>(f.dimension(b))].points.push_back({f.value(b), f.value(d), b, d});
  }
  for (Index e : p.essential())
    out[static_cast<std::size_t>(f.dimension(e))].points.push_back(
        {f.value(e), std::numeric_limits<double>::infinity(), e, kNoIndex});
  for (auto& dg : out)
    std::sort(dg.points.begin(), dg.points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
      if (a.birth != b.birth) return a.birth < b.birth;
      if (a.death != b.death) return a.death < b.death;
      return a.birth_cell < b.birth_cell;
    });
  return out;
}

/// Persistent homology over Z/2 of a filtration. The result references `f`.
inline PersistenceResult compute_persistence(const Filtration& f, const PersistenceOptions& opt = {}) {
  PersistenceResult r;
  r.pairing = Reducer(f, opt).run();
  r.diagrams = diagrams_from_pairing(r.pairing);
  return r;
}

/// Diagram with every finite value mapped through `fn` (e.g. unsquare).
template <class Fn>
PersistenceDiagram transform_values(const PersistenceDiagram& d, Fn&& fn) {
  PersistenceDiagram out = d;
  for (auto& p : out.points) {
    p.birth = fn(p.birth);
    if (!p.essential()) p.death = fn(p.death);
  }
  return out;
}

}  // namespace phkit
