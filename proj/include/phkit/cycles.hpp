#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/filtration.hpp"
#include "phkit/persistence.hpp"

namespace phkit {

/// A Z/2 chain witnessing one birth-death pair. `cells` are filtration
/// indices in ascending order.
struct RepresentativeCycle {
  int degree = 0;
  std::vector<Index> cells;
  Index birth_index = kNoIndex;
  Index death_index = kNoIndex;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  /// False when a tightened cycle could not be shown homologous to the input.
  bool same_class = true;
};

/// Representative of the pair born at `birth_index`: the reduced death
/// column for finite pairs (degree >= 1) and the younger vertex for degree 0.
/// Essential classes need `allow_essential`; in degree >= 1 they also need a
/// pairing computed with track_essential_cycles.
inline RepresentativeCycle representative_cycle(const PersistencePairing& p, Index birth_index,
                                                bool allow_essential = false) {
  const Filtration& f = p.filtration();
  if (birth_index >= f.size() || !p.is_birth(birth_index))
    throw InvalidInput("index " + std::to_string(birth_index) + " is not a birth cell");
  RepresentativeCycle c;
  c.degree = f.dimension(birth_index);
  c.birth_index = birth_index;
  c.birth = f.value(birth_index);
  const Index death = p.partner(birth_index);
  if (death == kNoIndex) {
    if (!allow_essential && c.degree != 0) throw EssentialPair();
    if (c.degree == 0) {
      c.cells = {birth_index};
      return c;
    }
    if (!p.tracks_essential_cycles())
      throw InvalidInput("essential cycles need a pairing computed with track_essential_cycles");
    // The V column is a chain of k-cells whose boundary sum is zero.
    auto v = p.essential_cycle(birth_index);
    c.cells.assign(v.begin(), v.end());
    return c;
  }
  c.death_index = death;
  c.death = f.value(death);
  if (c.degree == 0) {
    c.cells = {birth_index};
    return c;
  }
  auto col = p.reduced_column(death);
  c.cells.assign(col.begin(), col.end());
  return c;
}

inline RepresentativeCycle representative_cycle(const PersistencePairing& p, const DiagramPoint& pt,
                                                bool allow_essential = false) {
  return representative_cycle(p, pt.birth_cell, allow_essential);
}

/// Boundary of a chain over Z/2, ascending.
inline std::vector<Index> chain_boundary(const Filtration& f, const std::vector<Index>& chain) {
  std::vector<Index> out, tmp;
  for (Index c : chain) detail::add_columns(out, f.boundary(c), tmp);
  return out;
}

/// Shortest cycle through the birth edge inside the birth prefix: a
/// breadth-first path between the edge's endpoints over earlier edges, closed
/// by the birth edge. `same_class` reports whether the result is homologous
/// to `cycle` in the birth prefix.
inline RepresentativeCycle tighten_cycle_1d(const PersistencePairing& p, const RepresentativeCycle& cycle) {
  if (cycle.degree != 1) throw NotDegreeOne();
  const Filtration& f = p.filtration();
  const Index birth = cycle.birth_index;
  auto ends = f.boundary(birth);
  const Index src = ends[0], dst = ends[1];

  // Adjacency over edges strictly before the birth edge, in index order.
  std::vector<std::vector<std::pair<Index, Index>>> adj;
  std::vector<Index> slot(birth, kNoIndex);
  std::vector<Index> verts;
  auto vid = [&](Index v) {
    if (slot[v] == kNoIndex) {
      slot[v] = static_cast<Index>(verts.size());
      verts.push_back(v);
      adj.emplace_back();
    }
    return slot[v];
  };
  for (Index e = 0; e < birth; ++e) {
    if (f.dimension(e) != 1) continue;
    auto b = f.boundary(e);
    const Index a = vid(b[0]), c = vid(b[1]);
    adj[a].push_back({c, e});
    adj[c].push_back({a, e});
  }
  RepresentativeCycle out = cycle;
  if (slot[src] == kNoIndex || slot[dst] == kNoIndex) return out;
  const Index s = slot[src], t = slot[dst];
  std::vector<Index> via(verts.size(), kNoIndex), from(verts.size(), kNoIndex);
  std::vector<char> seen(verts.size(), 0);
  std::deque<Index> queue{s};
  seen[s] = 1;
  while (!queue.empty() && !seen[t]) {
    const Index u = queue.front();
    queue.pop_front();
    for (auto [w, e] : adj[u]) {
      if (seen[w]) continue;
      seen[w] = 1;
      via[w] = e;
      from[w] = u;
      queue.push_back(w);
    }
  }
  if (!seen[t]) return out;
  std::vector<Index> cells{birth};
  for (Index u = t; u != s; u = from[u]) cells.push_back(via[u]);
  std::sort(cells.begin(), cells.end());
  out.cells = cells;

  // Same class iff tight + original is a boundary of 2-cells before the birth.
  std::vector<Index> diff(cells), tmp;
  detail::add_columns(diff, cycle.cells, tmp);
  while (!diff.empty()) {
    const Index j = p.pivot_column(diff.back());
    if (j == kNoIndex || j >= birth || f.dimension(j) != 2) break;
    detail::add_columns(diff, p.reduced_column(j), tmp);
  }
  out.same_class = diff.empty();
  return out;
}

}  // namespace phkit
