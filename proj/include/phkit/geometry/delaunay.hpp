#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/geometry/predicates.hpp"

namespace phkit::geometry {

namespace detail {

/// Interleaves quantized coordinates into a Z-order key.
template <int D>
std::uint64_t morton_key(const double* p, const double* lo, const double* scale) {
  constexpr int bits = 64 / D;
  constexpr std::uint64_t max_q = (std::uint64_t{1} << bits) - 1;
  std::array<std::uint64_t, D> q;
  for (int k = 0; k < D; ++k) {
    double t = (p[k] - lo[k]) * scale[k];
    t = std::clamp(t, 0.0, static_cast<double>(max_q));
    q[k] = static_cast<std::uint64_t>(t);
  }
  std::uint64_t key = 0;
  for (int b = bits - 1; b >= 0; --b)
    for (int k = 0; k < D; ++k) key = (key << 1) | ((q[k] >> b) & 1u);
  return key;
}

}  // namespace detail

/// Incremental Bowyer-Watson Delaunay (or, with weights, regular)
/// triangulation in D = 2 or 3 dimensions.
///
/// Cells are positively oriented (D+1)-tuples of point indices; the hull is
/// closed by cells incident to a symbolic infinite vertex. Predicates are exact
/// and cospherical ties are broken by the height perturbation in Predicates,
/// so every input that is not affinely degenerate yields a valid triangulation.
template <int D>
class Triangulation {
  static_assert(D == 2 || D == 3, "triangulations are built in 2 or 3 dimensions");

 public:
  static constexpr int K = D + 1;
  using Ids = std::array<std::uint32_t, K>;
  static constexpr std::uint32_t kInfinite = std::numeric_limits<std::uint32_t>::max();

  /// `coords` holds D doubles per point; `weights` is empty or one per point.
  Triangulation(std::span<const double> coords, std::span<const double> weights)
      : n_(coords.size() / D), pred_(coords, weights) {
    if (n_ < static_cast<std::size_t>(K))
      throw DegenerateInput("need at least " + std::to_string(K) + " points");
    check_duplicates(coords);
    Ids first = initial_simplex();
    build_initial(first);
    for (std::uint32_t q : insertion_order(coords, first)) insert(q);
  }

  std::size_t num_points() const { return n_; }

  /// Finite cells, each with ascending vertex indices, in lexicographic order.
  std::vector<Ids> finite_cells() const {
    std::vector<Ids> out;
    for (const auto& c : cells_) {
      if (!c.alive || is_infinite(c)) continue;
      Ids v = c.v;
      std::sort(v.begin(), v.end());
      out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Points that are not vertices of the triangulation (weighted input only).
  std::vector<std::uint32_t> hidden_points() const {
    std::vector<char> seen(n_, 0);
    for (const auto& c : cells_)
      if (c.alive)
        for (auto v : c.v)
          if (v != kInfinite) seen[v] = 1;
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < n_; ++i)
      if (!seen[i]) out.push_back(i);
    return out;
  }

 private:
  struct Cell {
    Ids v{};
    Ids n{};
    bool alive = true;
  };

  static bool is_infinite(const Cell& c) {
    return std::find(c.v.begin(), c.v.end(), kInfinite) != c.v.end();
  }
  static int infinite_slot(const Cell& c) {
    for (int i = 0; i < K; ++i)
      if (c.v[i] == kInfinite) return i;
    return -1;
  }

  // Sup-norm tolerance below which two points count as the same point.
  static constexpr double kDuplicateTolerance = 1e-12;

  void check_duplicates(std::span<const double> coords) const {
    std::vector<std::uint32_t> idx(n_);
    std::iota(idx.begin(), idx.end(), 0u);
    auto p = [&](std::uint32_t i) { return coords.data() + std::size_t(D) * i; };
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::lexicographical_compare(p(a), p(a) + D, p(b), p(b) + D);
    });
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        if (p(idx[j])[0] - p(idx[i])[0] > kDuplicateTolerance) break;
        bool close = true;
        for (int k = 1; k < D && close; ++k)
          close = std::abs(p(idx[j])[k] - p(idx[i])[k]) <= kDuplicateTolerance;
        if (close)
          throw DuplicatePoints(std::min(idx[i], idx[j]), std::max(idx[i], idx[j]));
      }
    }
  }

  Ids initial_simplex() const {
    Ids s{};
    s[0] = 0;
    s[1] = 1;  // points are pairwise distinct at this stage
    std::uint32_t next = 2;
    if constexpr (D == 2) {
      for (; next < n_; ++next) {
        if (pred_.orient({s[0], s[1], next}) != 0) break;
      }
      if (next == n_) throw DegenerateInput("all points are collinear");
      s[2] = next;
    } else {
      auto collinear = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        // Collinear in 3D iff all three axis projections are collinear.
        for (int ax = 0; ax < 3; ++ax) {
          const int i = (ax + 1) % 3, j = (ax + 2) % 3;
          std::array<std::array<double, 2>, 3> pr;
          for (int t = 0; t < 3; ++t) {
            const double* pt = pred_.point(t == 0 ? a : t == 1 ? b : c);
            pr[t] = {pt[i], pt[j]};
          }
          if (orient<2>({pr[0].data(), pr[1].data(), pr[2].data()}) != 0) return false;
        }
        return true;
      };
      for (; next < n_; ++next)
        if (!collinear(s[0], s[1], next)) break;
      if (next == n_) throw DegenerateInput("all points are collinear");
      s[2] = next;
      for (next = 2; next < n_; ++next) {
        if (next == s[2]) continue;
        if (pred_.orient({s[0], s[1], s[2], next}) != 0) break;
      }
      if (next == n_) throw DegenerateInput("all points are coplanar");
      s[3] = next;
    }
    return s;
  }

  void build_initial(Ids s) {
    if (pred_.orient(s) < 0) std::swap(s[0], s[1]);
    cells_.reserve(8 * n_ + 16);
    cells_.push_back(Cell{s, {}, true});
    for (int i = 0; i < K; ++i) {
      Ids v = s;
      v[i] = kInfinite;
      // Replacing the infinite vertex by a point beyond face i must give a
      // positive orientation, so flip the parity of the copied face.
      const int a = (i + 1) % K, b = (i + 2) % K;
      std::swap(v[a], v[b]);
      cells_.push_back(Cell{v, {}, true});
    }
    // Link by shared faces (few cells, brute force).
    for (std::uint32_t c = 0; c < cells_.size(); ++c)
      for (int i = 0; i < K; ++i) {
        auto face = face_key(cells_[c], i);
        for (std::uint32_t d = 0; d < cells_.size(); ++d) {
          if (d == c) continue;
          for (int j = 0; j < K; ++j)
            if (face_key(cells_[d], j) == face) cells_[c].n[i] = d;
        }
      }
    last_ = 0;
    for (auto v : s) inserted_.push_back(v);
  }

  static std::array<std::uint32_t, D> face_key(const Cell& c, int drop) {
    std::array<std::uint32_t, D> f;
    for (int i = 0, k = 0; i < K; ++i)
      if (i != drop) f[k++] = c.v[i];
    std::sort(f.begin(), f.end());
    return f;
  }

  // Biased randomized insertion order: rounds of doubling size, each sorted
  // along a Z-order curve so that point location walks stay short.
  std::vector<std::uint32_t> insertion_order(std::span<const double> coords,
                                             const Ids& first) const {
    std::vector<std::uint32_t> order;
    order.reserve(n_);
    for (std::uint32_t i = 0; i < n_; ++i)
      if (std::find(first.begin(), first.end(), i) == first.end()) order.push_back(i);
    std::mt19937_64 rng(0x5eed1234abcdULL);
    std::shuffle(order.begin(), order.end(), rng);

    std::array<double, D> lo, hi, scale;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n_; ++i)
      for (int k = 0; k < D; ++k) {
        lo[k] = std::min(lo[k], coords[D * i + k]);
        hi[k] = std::max(hi[k], coords[D * i + k]);
      }
    constexpr int bits = 64 / D;
    for (int k = 0; k < D; ++k) {
      const double ext = hi[k] - lo[k];
      scale[k] = ext > 0 ? static_cast<double>((std::uint64_t{1} << bits) - 1) / ext : 0.0;
    }
    std::vector<std::uint64_t> key(n_);
    for (auto i : order) key[i] = detail::morton_key<D>(coords.data() + D * i, lo.data(), scale.data());

    std::size_t begin = 0, len = std::min<std::size_t>(order.size(), 64);
    while (begin < order.size()) {
      const std::size_t end = std::min(order.size(), begin + len);
      std::sort(order.begin() + begin, order.begin() + end,
                [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });
      begin = end;
      len *= 2;
    }
    return order;
  }

  bool in_conflict(std::uint32_t ci, std::uint32_t q) const {
    const Cell& c = cells_[ci];
    const int inf = infinite_slot(c);
    if (inf < 0) return pred_.in_conflict(c.v, q);
    Ids v = c.v;
    v[inf] = q;
    const int o = pred_.orient(v);
    if (o != 0) return o > 0;
    // Coplanar with a hull face: conflict iff inside the finite neighbor's sphere.
    return pred_.in_conflict(cells_[c.n[inf]].v, q);
  }

  std::uint32_t locate(std::uint32_t q) {
    std::uint32_t c = last_;
    if (!cells_[c].alive) c = first_alive();
    if (int inf = infinite_slot(cells_[c]); inf >= 0) c = cells_[c].n[inf];
    std::uint32_t prev = std::numeric_limits<std::uint32_t>::max();
    const std::size_t max_steps = 4 * cells_.size() + 64;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const Cell& cell = cells_[c];
      if (is_infinite(cell)) return c;
      const int offset = static_cast<int>(walk_rng_() % K);
      bool moved = false;
      for (int t = 0; t < K; ++t) {
        const int i = (offset + t) % K;
        const std::uint32_t nb = cell.n[i];
        if (nb == prev) continue;
        Ids v = cell.v;
        v[i] = q;
        if (pred_.orient(v) < 0) {
          prev = c;
          c = nb;
          moved = true;
          break;
        }
      }
      if (!moved) return c;
    }
    // The visibility walk is acyclic on Delaunay and regular triangulations;
    // scanning is a last resort.
    for (std::uint32_t ci = 0; ci < cells_.size(); ++ci)
      if (cells_[ci].alive && in_conflict(ci, q)) return ci;
    return c;
  }

  std::uint32_t first_alive() const {
    for (std::uint32_t ci = 0; ci < cells_.size(); ++ci)
      if (cells_[ci].alive) return ci;
    return 0;
  }

  std::uint32_t new_cell(const Cell& c) {
    if (!free_.empty()) {
      const std::uint32_t id = free_.back();
      free_.pop_back();
      cells_[id] = c;
      mark_[id] = 0;
      return id;
    }
    cells_.push_back(c);
    mark_.push_back(0);
    return static_cast<std::uint32_t>(cells_.size() - 1);
  }

  void insert(std::uint32_t q) {
    if (mark_.size() < cells_.size()) mark_.resize(cells_.size(), 0);
    const std::uint32_t start = locate(q);
    if (!in_conflict(start, q)) return;  // hidden by its weighted neighbours

    epoch_ += 2;
    const std::uint64_t in = epoch_, out = epoch_ + 1;
    conflict_.clear();
    boundary_.clear();
    stack_.clear();
    stack_.push_back(start);
    mark_[start] = in;
    while (!stack_.empty()) {
      const std::uint32_t c = stack_.back();
      stack_.pop_back();
      conflict_.push_back(c);
      for (int i = 0; i < K; ++i) {
        const std::uint32_t nb = cells_[c].n[i];
        if (mark_[nb] == in) continue;
        if (mark_[nb] != out) {
          if (in_conflict(nb, q)) {
            mark_[nb] = in;
            stack_.push_back(nb);
            continue;
          }
          mark_[nb] = out;
        }
        boundary_.emplace_back(c, i);
      }
    }

    // Star the cavity boundary from q.
    ridges_.clear();
    std::uint32_t any_finite = std::numeric_limits<std::uint32_t>::max();
    for (auto [c, i] : boundary_) {
      Cell fresh;
      fresh.v = cells_[c].v;
      fresh.v[i] = q;
      const std::uint32_t outside = cells_[c].n[i];
      fresh.n.fill(std::numeric_limits<std::uint32_t>::max());
      fresh.n[i] = outside;
      const std::uint32_t id = new_cell(fresh);
      Cell& nb = cells_[outside];
      for (int j = 0; j < K; ++j)
        if (nb.n[j] == c) {
          nb.n[j] = id;
          break;
        }
      const Cell& made = cells_[id];
      if (!is_infinite(made)) any_finite = id;
      for (int s = 0; s < K; ++s) {
        if (s == i) continue;
        // Face opposite slot s contains q; key it by its other D-1 vertices.
        std::array<std::uint32_t, D - 1> r;
        for (int t = 0, k = 0; t < K; ++t)
          if (t != s && t != i) r[k++] = made.v[t];
        std::sort(r.begin(), r.end());
        std::uint64_t key = r[0];
        if constexpr (D == 3) key = (std::uint64_t{r[0]} << 32) | r[1];
        ridges_.push_back({key, id, s});
      }
    }
    std::sort(ridges_.begin(), ridges_.end(),
              [](const Ridge& a, const Ridge& b) { return a.key < b.key; });
    for (std::size_t k = 0; k + 1 < ridges_.size(); k += 2) {
      const Ridge& a = ridges_[k];
      const Ridge& b = ridges_[k + 1];
      cells_[a.cell].n[a.slot] = b.cell;
      cells_[b.cell].n[b.slot] = a.cell;
    }
    for (auto c : conflict_) {
      cells_[c].alive = false;
      free_.push_back(c);
    }
    last_ = any_finite != std::numeric_limits<std::uint32_t>::max()
                ? any_finite
                : cells_[boundary_.front().first].n[boundary_.front().second];
    if (!cells_[last_].alive) last_ = first_alive();
    inserted_.push_back(q);
  }

  struct Ridge {
    std::uint64_t key;
    std::uint32_t cell;
    int slot;
  };

  std::size_t n_;
  Predicates<D> pred_;
  std::vector<Cell> cells_;
  std::vector<std::uint64_t> mark_;
  std::vector<std::uint32_t> free_;
  std::vector<std::uint32_t> inserted_;
  std::uint32_t last_ = 0;
  std::uint64_t epoch_ = 0;
  std::minstd_rand walk_rng_{12345};
  // Scratch buffers reused across insertions.
  std::vector<std::uint32_t> conflict_, stack_;
  std::vector<std::pair<std::uint32_t, int>> boundary_;
  std::vector<Ridge> ridges_;
};

}  // namespace phkit::geometry
