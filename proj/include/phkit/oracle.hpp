#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/filtration.hpp"
#include "phkit/persistence.hpp"

namespace phkit {

inline constexpr std::size_t kOracleCellLimit = 300;

namespace detail {

/// Dense Z/2 vectors with incremental row echelon form.
class BitBasis {
 public:
  explicit BitBasis(std::size_t bits) : words_((bits + 63) / 64) {}

  using Vec = std::vector<std::uint64_t>;
  Vec zero() const { return Vec(words_, 0); }

  static int lead(const Vec& v) {
    for (std::size_t w = v.size(); w-- > 0;)
      if (v[w]) return static_cast<int>(w * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(v[w])));
    return -1;
  }

  /// Adds `v` to the span; returns true when it was independent.
  bool insert(Vec v) {
    for (int l = lead(v); l >= 0; l = lead(v)) {
      auto it = rows_.find_lead(l);
      if (it < 0) {
        rows_.add(l, std::move(v));
        return true;
      }
      const Vec& r = rows_.vec(it);
      for (std::size_t w = 0; w < v.size(); ++w) v[w] ^= r[w];
    }
    return false;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  struct Rows {
    std::vector<int> lead_of;  // lead bit -> row
    std::vector<Vec> vecs;
    int find_lead(int l) const {
      return static_cast<std::size_t>(l) < lead_of.size() ? lead_of[static_cast<std::size_t>(l)] : -1;
    }
    void add(int l, Vec v) {
      if (lead_of.size() <= static_cast<std::size_t>(l)) lead_of.resize(static_cast<std::size_t>(l) + 1, -1);
      lead_of[static_cast<std::size_t>(l)] = static_cast<int>(vecs.size());
      vecs.push_back(std::move(v));
    }
    const Vec& vec(int i) const { return vecs[static_cast<std::size_t>(i)]; }
    std::size_t size() const { return vecs.size(); }
  };
  std::size_t words_;
  Rows rows_;
};

}  // namespace detail

/// Persistence diagrams from persistent Betti numbers by dense linear algebra:
///   mu(b, d) = beta(b, d-1) - beta(b, d) - beta(b-1, d-1) + beta(b-1, d)
/// over the distinct filtration values. Independent of the reduction engine;
/// intended for checking it. Throws TooLarge above kOracleCellLimit cells.
inline std::vector<PersistenceDiagram> oracle_persistence(const Filtration& f) {
  if (f.size() > kOracleCellLimit) throw TooLarge("oracle is limited to 300 cells");
  const int top = f.max_dimension();
  std::vector<PersistenceDiagram> out(static_cast<std::size_t>(std::max(0, top + 1)));
  if (f.empty()) return out;

  std::vector<double> levels(f.values().begin(), f.values().end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t m = levels.size();
  // level_of[i]: 1-based level at which cell i is present.
  std::vector<std::size_t> level_of(f.size());
  for (Index i = 0; i < f.size(); ++i)
    level_of[i] = static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), f.value(i)) -
                                           levels.begin()) + 1;

  // Position of every cell within its dimension.
  std::vector<std::size_t> pos(f.size());
  std::vector<std::vector<Index>> by_dim(static_cast<std::size_t>(top + 1));
  for (Index i = 0; i < f.size(); ++i) {
    auto& d = by_dim[static_cast<std::size_t>(f.dimension(i))];
    pos[i] = d.size();
    d.push_back(i);
  }

  for (int k = 0; k <= top; ++k) {
    const auto& ck = by_dim[static_cast<std::size_t>(k)];
    const std::size_t nk = ck.size();
    using Vec = detail::BitBasis::Vec;

    // Cycle space of K_i for every level i, as a list of basis vectors.
    // A k-chain is a cycle iff its boundary vanishes: Gaussian elimination
    // of the boundary columns while tracking combinations.
    std::vector<std::vector<Vec>> cycles(m + 1);
    {
      const std::size_t nprev = k > 0 ? by_dim[static_cast<std::size_t>(k - 1)].size() : 0;
      detail::BitBasis probe(std::max<std::size_t>(nprev, 1));
      std::vector<std::pair<Vec, Vec>> echelon;  // (boundary, combination)
      std::vector<Vec> found;
      std::size_t next = 0;
      for (std::size_t i = 1; i <= m; ++i) {
        for (; next < nk && level_of[ck[next]] <= i; ++next) {
          Vec bd((std::max<std::size_t>(nprev, 1) + 63) / 64, 0);
          for (Index face : f.boundary(ck[next])) bd[pos[face] / 64] ^= std::uint64_t{1} << (pos[face] % 64);
          Vec comb((std::max<std::size_t>(nk, 1) + 63) / 64, 0);
          comb[next / 64] |= std::uint64_t{1} << (next % 64);
          bool changed = true;
          while (changed) {
            changed = false;
            const int l = detail::BitBasis::lead(bd);
            if (l < 0) break;
            for (const auto& [eb, ec] : echelon)
              if (detail::BitBasis::lead(eb) == l) {
                for (std::size_t w = 0; w < bd.size(); ++w) bd[w] ^= eb[w];
                for (std::size_t w = 0; w < comb.size(); ++w) comb[w] ^= ec[w];
                changed = true;
                break;
              }
          }
          if (detail::BitBasis::lead(bd) < 0) found.push_back(comb);
          else echelon.emplace_back(std::move(bd), std::move(comb));
        }
        cycles[i] = found;
      }
    }

    // Boundaries B_k(K_j): images of (k+1)-cells present at level j.
    std::vector<std::vector<Vec>> bounds(m + 1);
    if (k + 1 <= top) {
      const auto& up = by_dim[static_cast<std::size_t>(k + 1)];
      std::size_t next = 0;
      std::vector<Vec> acc;
      for (std::size_t j = 1; j <= m; ++j) {
        for (; next < up.size() && level_of[up[next]] <= j; ++next) {
          Vec bd((std::max<std::size_t>(nk, 1) + 63) / 64, 0);
          for (Index face : f.boundary(up[next])) bd[pos[face] / 64] ^= std::uint64_t{1} << (pos[face] % 64);
          acc.push_back(std::move(bd));
        }
        bounds[j] = acc;
      }
    }

    // beta[i][j] = rank of H_k(K_i) -> H_k(K_j) = dim(Z_i + B_j) - dim B_j.
    std::vector<std::vector<long>> beta(m + 2, std::vector<long>(m + 2, 0));
    for (std::size_t j = 1; j <= m; ++j) {
      detail::BitBasis b(std::max<std::size_t>(nk, 1));
      for (const auto& v : bounds[j]) b.insert(v);
      const long rb = static_cast<long>(b.rank());
      for (std::size_t i = 1; i <= j; ++i) {
        detail::BitBasis zb = b;
        for (const auto& v : cycles[i]) zb.insert(v);
        beta[i][j] = static_cast<long>(zb.rank()) - rb;
      }
    }

    auto& dg = out[static_cast<std::size_t>(k)];
    dg.degree = k;
    for (std::size_t i = 1; i <= m; ++i) {
      for (std::size_t j = i + 1; j <= m; ++j) {
        const long mu = beta[i][j - 1] - beta[i][j] - beta[i - 1][j - 1] + beta[i - 1][j];
        for (long c = 0; c < mu; ++c) dg.points.push_back({levels[i - 1], levels[j - 1]});
      }
      const long ess = beta[i][m] - beta[i - 1][m];
      for (long c = 0; c < ess; ++c) dg.points.push_back({levels[i - 1], std::numeric_limits<double>::infinity()});
    }
  }
  return out;
}

}  // namespace phkit
