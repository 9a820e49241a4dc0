#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/persistence.hpp"

namespace phkit {

/// One matched pair. Indices refer to `points` of the two input diagrams;
/// kDiagonal stands for the projection onto the diagonal.
struct MatchEdge {
  static constexpr std::ptrdiff_t kDiagonal = -1;
  std::ptrdiff_t a = kDiagonal;
  std::ptrdiff_t b = kDiagonal;
  double cost = 0.0;
};

struct DiagramDistanceReport {
  double value = 0.0;
  std::vector<MatchEdge> matching;
};

namespace detail {

inline double sup_cost(const DiagramPoint& p, const DiagramPoint& q) {
  return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}
inline double diagonal_cost(const DiagramPoint& p) { return (p.death - p.birth) / 2.0; }

struct Split {
  std::vector<std::ptrdiff_t> finite;
  std::vector<std::ptrdiff_t> essential;  // sorted by birth
};

inline Split split(const PersistenceDiagram& d) {
  Split s;
  for (std::size_t i = 0; i < d.points.size(); ++i)
    (d.points[i].essential() ? s.essential : s.finite).push_back(static_cast<std::ptrdiff_t>(i));
  std::stable_sort(s.essential.begin(), s.essential.end(),
                   [&](std::ptrdiff_t x, std::ptrdiff_t y) { return d.points[x].birth < d.points[y].birth; });
  return s;
}

/// Essential points are matched in birth order. Returns false when the counts differ.
inline bool match_essential(const PersistenceDiagram& a, const PersistenceDiagram& b, const Split& sa,
                            const Split& sb, std::vector<MatchEdge>& out) {
  if (sa.essential.size() != sb.essential.size()) return false;
  for (std::size_t k = 0; k < sa.essential.size(); ++k)
    out.push_back({sa.essential[k], sb.essential[k],
                   std::abs(a.points[sa.essential[k]].birth - b.points[sb.essential[k]].birth)});
  return true;
}

/// Hopcroft-Karp on a bipartite graph with `n` left and `n` right vertices.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::size_t n) : n_(n), adj_(n), match_l_(n), match_r_(n), dist_(n) {}
  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  std::size_t max_matching() {
    std::fill(match_l_.begin(), match_l_.end(), kNone);
    std::fill(match_r_.begin(), match_r_.end(), kNone);
    std::size_t size = 0;
    while (bfs())
      for (std::size_t l = 0; l < n_; ++l)
        if (match_l_[l] == kNone && dfs(l)) ++size;
    return size;
  }
  std::size_t partner(std::size_t l) const { return match_l_[l]; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t l = 0; l < n_; ++l) {
      dist_[l] = match_l_[l] == kNone ? 0 : kNone;
      if (match_l_[l] == kNone) q.push(l);
    }
    while (!q.empty()) {
      const std::size_t l = q.front();
      q.pop();
      for (std::size_t r : adj_[l]) {
        const std::size_t l2 = match_r_[r];
        if (l2 == kNone) found = true;
        else if (dist_[l2] == kNone) {
          dist_[l2] = dist_[l] + 1;
          q.push(l2);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      const std::size_t l2 = match_r_[r];
      if (l2 == kNone || (dist_[l2] == dist_[l] + 1 && dfs(l2))) {
        match_l_[l] = r;
        match_r_[r] = l;
        return true;
      }
    }
    dist_[l] = kNone;
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_l_, match_r_, dist_;
};

/// Augmented cost between left slot i and right slot j. Left slots are the
/// n finite points of A followed by m diagonal copies; right slots are the m
/// points of B followed by n diagonal copies.
struct AugmentedCosts {
  const PersistenceDiagram& a;
  const PersistenceDiagram& b;
  const std::vector<std::ptrdiff_t>& fa;
  const std::vector<std::ptrdiff_t>& fb;

  std::size_t n() const { return fa.size(); }
  std::size_t m() const { return fb.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    const bool ra = i < n(), rb = j < m();
    if (ra && rb) return sup_cost(a.points[fa[i]], b.points[fb[j]]);
    if (ra) return diagonal_cost(a.points[fa[i]]);
    if (rb) return diagonal_cost(b.points[fb[j]]);
    return 0.0;
  }
  MatchEdge edge(std::size_t i, std::size_t j) const {
    MatchEdge e;
    if (i < n()) e.a = fa[i];
    if (j < m()) e.b = fb[j];
    e.cost = (*this)(i, j);
    return e;
  }
};

}  // namespace detail

/// Bottleneck distance with sup-norm ground cost. Different numbers of
/// essential points give +inf; equal numbers are matched in birth order.
inline DiagramDistanceReport bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  DiagramDistanceReport rep;
  const auto sa = detail::split(a), sb = detail::split(b);
  if (!detail::match_essential(a, b, sa, sb, rep.matching)) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.matching.clear();
    return rep;
  }
  double ess = 0.0;
  for (const auto& e : rep.matching) ess = std::max(ess, e.cost);

  const detail::AugmentedCosts cost{a, b, sa.finite, sb.finite};
  const std::size_t n = cost.n(), m = cost.m(), N = n + m;
  std::vector<double> cand{0.0};
  for (std::size_t i = 0; i < n; ++i) cand.push_back(cost(i, m));
  for (std::size_t j = 0; j < m; ++j) cand.push_back(cost(n, j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) cand.push_back(cost(i, j));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  // Point i of A may use only diagonal slot m+i, and diagonal slot n+j only
  // point j of B; diagonal slots pair freely among themselves.
  auto feasible = [&](double c, detail::BipartiteMatcher& bm) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j)
        if (cost(i, j) <= c) bm.add_edge(i, j);
      if (cost(i, m) <= c) bm.add_edge(i, m + i);
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (cost(n, j) <= c) bm.add_edge(n + j, j);
      for (std::size_t i = 0; i < n; ++i) bm.add_edge(n + j, m + i);
    }
    return bm.max_matching() == N;
  };
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    detail::BipartiteMatcher bm(N);
    if (feasible(cand[mid], bm)) hi = mid;
    else lo = mid + 1;
  }
  detail::BipartiteMatcher bm(N);
  feasible(cand[lo], bm);
  rep.value = std::max(ess, N ? cand[lo] : 0.0);
  for (std::size_t l = 0; l < N; ++l) {
    const std::size_t r = bm.partner(l);
    if (l >= n && r >= m) continue;
    rep.matching.push_back(cost.edge(l, r));
  }
  return rep;
}

/// q-Wasserstein distance with sup-norm ground cost, solved exactly by the
/// Hungarian method on the diagonal-augmented cost matrix.
inline DiagramDistanceReport wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                                  double q = 1.0) {
  if (std::isnan(q) || q < 1.0) throw BadParams("Wasserstein order q must be at least 1");
  if (std::isinf(q)) return bottleneck_distance(a, b);
  DiagramDistanceReport rep;
  const auto sa = detail::split(a), sb = detail::split(b);
  if (!detail::match_essential(a, b, sa, sb, rep.matching)) {
    rep.value = std::numeric_limits<double>::infinity();
    rep.matching.clear();
    return rep;
  }
  double total = 0.0;
  for (const auto& e : rep.matching) total += std::pow(e.cost, q);

  const detail::AugmentedCosts cost{a, b, sa.finite, sb.finite};
  const std::size_t n = cost.n(), m = cost.m(), N = n + m;
  if (N > 0) {
    // Hungarian algorithm with potentials, 1-based as in the classic formulation.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(N + 1, 0.0), v(N + 1, 0.0), minv(N + 1);
    std::vector<std::size_t> p(N + 1, 0), way(N + 1, 0);
    std::vector<char> used(N + 1);
    auto c = [&](std::size_t i, std::size_t j) { return std::pow(cost(i - 1, j - 1), q); };
    for (std::size_t i = 1; i <= N; ++i) {
      p[0] = i;
      std::size_t j0 = 0;
      std::fill(minv.begin(), minv.end(), inf);
      std::fill(used.begin(), used.end(), 0);
      do {
        used[j0] = 1;
        const std::size_t i0 = p[j0];
        double delta = inf;
        std::size_t j1 = 0;
        for (std::size_t j = 1; j <= N; ++j) {
          if (used[j]) continue;
          const double cur = c(i0, j) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= N; ++j) {
          if (used[j]) {
            u[p[j]] += delta;
            v[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        const std::size_t j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0);
    }
    for (std::size_t j = 1; j <= N; ++j) {
      const std::size_t i = p[j] - 1, jj = j - 1;
      if (i >= n && jj >= m) continue;
      MatchEdge e = cost.edge(i, jj);
      total += std::pow(e.cost, q);
      rep.matching.push_back(e);
    }
  }
  rep.value = std::pow(total, 1.0 / q);
  return rep;
}

}  // namespace phkit
