#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "phkit/filtration.hpp"
#include "phkit/persistence.hpp"
#include "phkit/simplex.hpp"

namespace phkit {

/// Betti numbers over Z/2 of the first `prefix` cells of a filtration
/// (beta_k = dim ker d_k - rank d_{k+1}). The prefix must be face-closed,
/// which holds for every prefix of a valid filtration.
inline std::vector<int> betti_numbers(const Filtration& f, std::size_t prefix) {
  prefix = std::min(prefix, f.size());
  int top = -1;
  for (Index i = 0; i < prefix; ++i) top = std::max(top, f.dimension(i));
  if (top < 0) return {};
  std::vector<int> cells(static_cast<std::size_t>(top + 2), 0), rank(static_cast<std::size_t>(top + 2), 0);
  std::vector<Index> pivot(prefix, kNoIndex);
  std::vector<std::vector<Index>> reduced(prefix);
  std::vector<Index> col, tmp;
  for (Index j = 0; j < prefix; ++j) {
    const int d = f.dimension(j);
    ++cells[static_cast<std::size_t>(d)];
    auto bd = f.boundary(j);
    col.assign(bd.begin(), bd.end());
    while (!col.empty() && pivot[col.back()] != kNoIndex)
      detail::add_columns(col, reduced[pivot[col.back()]], tmp);
    if (col.empty()) continue;
    pivot[col.back()] = j;
    reduced[j] = col;
    ++rank[static_cast<std::size_t>(d)];
  }
  std::vector<int> beta(static_cast<std::size_t>(top + 1));
  for (int k = 0; k <= top; ++k)
    beta[static_cast<std::size_t>(k)] = cells[static_cast<std::size_t>(k)] - rank[static_cast<std::size_t>(k)] -
                                        rank[static_cast<std::size_t>(k + 1)];
  return beta;
}

inline std::vector<int> betti_numbers(const Filtration& f) { return betti_numbers(f, f.size()); }

/// Betti numbers of a complex, indexed by degree 0 .. dimension.
inline std::vector<int> betti_numbers(const SimplicialComplex& c) {
  SimplicialFiltrationBuilder b;
  for (const auto& s : c.sorted_cells()) b.add(s, 0.0);
  return betti_numbers(std::move(b).build());
}

}  // namespace phkit
