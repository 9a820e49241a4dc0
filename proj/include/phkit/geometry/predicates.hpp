#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace phkit::geometry {

namespace detail {

template <int N>
using Mat = std::array<std::array<double, N>, N>;

template <int N>
using ExactMat = std::array<std::array<mpq_class, N>, N>;

/// Determinant of `m` together with the permanent of `mag`, an entrywise
/// upper bound on the magnitudes that produced `m` (Laplace expansion).
template <int N>
std::pair<double, double> det_perm(const Mat<N>& m, const Mat<N>& mag) {
  if constexpr (N == 1) {
    return {m[0][0], mag[0][0]};
  } else if constexpr (N == 2) {
    return {m[0][0] * m[1][1] - m[0][1] * m[1][0], mag[0][0] * mag[1][1] + mag[0][1] * mag[1][0]};
  } else {
    double det = 0.0, perm = 0.0;
    Mat<N - 1> minor, minor_mag;
    for (int col = 0; col < N; ++col) {
      for (int r = 1; r < N; ++r)
        for (int c = 0, k = 0; c < N; ++c)
          if (c != col) {
            minor[r - 1][k] = m[r][c];
            minor_mag[r - 1][k++] = mag[r][c];
          }
      auto [d, p] = det_perm<N - 1>(minor, minor_mag);
      const double t = m[0][col] * d;
      det += (col % 2 == 0) ? t : -t;
      perm += mag[0][col] * p;
    }
    return {det, perm};
  }
}

/// Exact determinant sign by rational Gaussian elimination.
template <int N>
int exact_det_sign(ExactMat<N> m) {
  int sign = 1;
  for (int col = 0; col < N; ++col) {
    int pivot = -1;
    for (int r = col; r < N; ++r)
      if (sgn(m[r][col]) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      sign = -sign;
    }
    if (sgn(m[col][col]) < 0) sign = -sign;
    for (int r = col + 1; r < N; ++r) {
      if (sgn(m[r][col]) == 0) continue;
      mpq_class f = m[r][col] / m[col][col];
      for (int c = col; c < N; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return sign;
}

inline int sign_of(double x) { return (x > 0) - (x < 0); }

/// Sign of a determinant whose double evaluation is `m` and whose exact
/// evaluation is produced on demand by `exact`.
template <int N, class ExactFn>
int filtered_sign(const Mat<N>& m, const Mat<N>& mag, ExactFn&& exact) {
  auto [det, perm] = det_perm<N>(m, mag);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double bound = (16.0 * N + 32.0) * eps * perm;
  if (std::isfinite(det) && std::isfinite(perm) && perm > 1e-250 && std::abs(det) > bound)
    return sign_of(det);
  if (perm == 0.0) return 0;
  return exact_det_sign<N>(exact());
}

}  // namespace detail

/// Sign of det[p1-p0; ...; pN-p0] for N-dimensional points given as pointers.
template <int N>
int orient(const std::array<const double*, N + 1>& p) {
  detail::Mat<N> m, mag;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      m[i][k] = p[i + 1][k] - p[0][k];
      mag[i][k] = std::abs(m[i][k]);
    }
  return detail::filtered_sign<N>(m, mag, [&] {
    detail::ExactMat<N> e;
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) e[i][k] = mpq_class(p[i + 1][k]) - mpq_class(p[0][k]);
    return e;
  });
}

/// Exact orientation, lifted power tests and the perturbed conflict test for
/// a D-dimensional point set with optional weights (squared radii).
///
/// The lifted height of point i is |p_i|^2 - w_i. Degenerate power tests are
/// resolved by perturbing height i by eps^i (point index = rank), which turns
/// every tie into a sign of a lower-order orientation determinant.
template <int D>
class Predicates {
 public:
  using Ids = std::array<std::uint32_t, D + 1>;

  Predicates(std::span<const double> coords, std::span<const double> weights)
      : coords_(coords), weights_(weights) {}

  const double* point(std::uint32_t i) const { return coords_.data() + std::size_t(D) * i; }
  double weight(std::uint32_t i) const { return weights_.empty() ? 0.0 : weights_[i]; }
  bool weighted() const { return !weights_.empty(); }

  int orient(const Ids& ids) const {
    std::array<const double*, D + 1> p;
    for (int i = 0; i <= D; ++i) p[i] = point(ids[i]);
    return geometry::orient<D>(p);
  }

  /// Sign of det[p_i - q, |p_i - q|^2 - w_i + w_q] over the D+1 cell points.
  int power_raw(const Ids& ids, std::uint32_t q) const {
    constexpr int N = D + 1;
    const double* qp = point(q);
    const double wq = weight(q);
    detail::Mat<N> m, mag;
    for (int i = 0; i < N; ++i) {
      const double* p = point(ids[i]);
      double lift = 0.0;
      for (int k = 0; k < D; ++k) {
        const double d = p[k] - qp[k];
        m[i][k] = d;
        mag[i][k] = std::abs(d);
        lift += d * d;
      }
      mag[i][D] = lift;
      if (weighted()) {
        lift = lift - weight(ids[i]) + wq;
        mag[i][D] += std::abs(weight(ids[i])) + std::abs(wq);
      }
      m[i][D] = lift;
    }
    return detail::filtered_sign<N>(m, mag, [&] {
      detail::ExactMat<N> e;
      for (int i = 0; i < N; ++i) {
        const double* p = point(ids[i]);
        mpq_class lift = 0;
        for (int k = 0; k < D; ++k) {
          e[i][k] = mpq_class(p[k]) - mpq_class(qp[k]);
          lift += e[i][k] * e[i][k];
        }
        if (weighted()) lift += mpq_class(wq) - mpq_class(weight(ids[i]));
        e[i][D] = lift;
      }
      return e;
    });
  }

  /// True when q lies strictly inside the (perturbed) power sphere of a
  /// positively oriented cell. Never ambiguous.
  bool in_conflict(const Ids& cell, std::uint32_t q) const {
    int s = power_raw(cell, q);
    if (s == 0) s = perturbed_power_sign(cell, q);
    // Inside <=> (-1)^D * det > 0 for positively oriented cells.
    return (D % 2 == 0) ? s > 0 : s < 0;
  }

 private:
  // Leading nonzero coefficient of det M(eps), where row r of M is
  // [x_r, h_r + eps^rank(r), 1] for the cell points followed by q.
  int perturbed_power_sign(const Ids& cell, std::uint32_t q) const {
    std::array<std::uint32_t, D + 2> rows;
    for (int i = 0; i <= D; ++i) rows[i] = cell[i];
    rows[D + 1] = q;
    std::array<int, D + 2> by_rank;
    for (int i = 0; i < D + 2; ++i) by_rank[i] = i;
    std::sort(by_rank.begin(), by_rank.end(),
              [&](int a, int b) { return rows[a] < rows[b]; });
    for (int r : by_rank) {
      Ids rest;
      for (int i = 0, k = 0; i < D + 2; ++i)
        if (i != r) rest[k++] = rows[i];
      // Cofactor (-1)^(r+D) * minor, and minor = (-1)^D * orient(rest).
      const int o = orient(rest);
      if (o != 0) return (r % 2 == 0) ? o : -o;
    }
    return 0;  // unreachable for a non-degenerate cell
  }

  std::span<const double> coords_;
  std::span<const double> weights_;
};

}  // namespace phkit::geometry
