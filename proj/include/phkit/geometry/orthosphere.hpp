#pragma once

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <utility>

namespace phkit::geometry {

/// Smallest sphere orthogonal to the weighted vertices of a simplex: its
/// center lies in the simplex's affine hull and `radius2` is the squared
/// radius (power). Unweighted vertices give the circumsphere.
template <int D>
struct Orthosphere {
  std::array<double, D> center{};
  double radius2 = 0.0;
};

namespace detail {

// Relative Gram determinant below which the double solve is not trusted.
inline constexpr double kIllConditioned = 1e-6;

template <int D>
Orthosphere<D> orthosphere_exact(const std::array<const double*, D + 1>& p,
                                 const std::array<double, D + 1>& w, int k) {
  std::array<std::array<mpq_class, D>, D> e;
  std::array<std::array<mpq_class, D + 1>, D> g;  // augmented Gram system
  for (int j = 0; j < k; ++j)
    for (int c = 0; c < D; ++c) e[j][c] = mpq_class(p[j + 1][c]) - mpq_class(p[0][c]);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      g[i][j] = 0;
      for (int c = 0; c < D; ++c) g[i][j] += e[i][c] * e[j][c];
    }
    mpq_class b = g[i][i] - mpq_class(w[i + 1]) + mpq_class(w[0]);
    g[i][k] = b / 2;
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    while (piv < k && sgn(g[piv][col]) == 0) ++piv;
    if (piv == k) continue;  // affinely dependent; leave the component at zero
    std::swap(g[piv], g[col]);
    for (int r = 0; r < k; ++r) {
      if (r == col || sgn(g[r][col]) == 0) continue;
      mpq_class f = g[r][col] / g[col][col];
      for (int c = col; c <= k; ++c) g[r][c] -= f * g[col][c];
    }
  }
  std::array<mpq_class, D> lambda;
  for (int i = 0; i < k; ++i) lambda[i] = sgn(g[i][i]) == 0 ? mpq_class(0) : g[i][k] / g[i][i];
  Orthosphere<D> s;
  mpq_class r2 = -mpq_class(w[0]);
  for (int c = 0; c < D; ++c) {
    mpq_class off = 0;
    for (int j = 0; j < k; ++j) off += lambda[j] * e[j][c];
    r2 += off * off;
    s.center[c] = mpq_class(mpq_class(p[0][c]) + off).get_d();
  }
  s.radius2 = r2.get_d();
  return s;
}

}  // namespace detail

/// Orthosphere of the simplex p[0..k] with weights w[0..k], 0 <= k <= D.
template <int D>
Orthosphere<D> orthosphere(const std::array<const double*, D + 1>& p,
                           const std::array<double, D + 1>& w, int k) {
  Orthosphere<D> s;
  if (k == 0) {
    for (int c = 0; c < D; ++c) s.center[c] = p[0][c];
    s.radius2 = w[0] == 0.0 ? 0.0 : -w[0];
    return s;
  }
  std::array<std::array<double, D>, D> e{};
  std::array<std::array<double, D>, D> g{};
  std::array<double, D> b{};
  for (int j = 0; j < k; ++j)
    for (int c = 0; c < D; ++c) e[j][c] = p[j + 1][c] - p[0][c];
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double dot = 0.0;
      for (int c = 0; c < D; ++c) dot += e[i][c] * e[j][c];
      g[i][j] = dot;
    }
    b[i] = 0.5 * (g[i][i] - w[i + 1] + w[0]);
  }

  std::array<double, D> lambda{};
  double det = 0.0, diag = 1.0;
  for (int i = 0; i < k; ++i) diag *= g[i][i];
  if (k == 1) {
    det = g[0][0];
    lambda[0] = b[0] / g[0][0];
  } else if (k == 2) {
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    lambda[0] = (b[0] * g[1][1] - b[1] * g[0][1]) / det;
    lambda[1] = (g[0][0] * b[1] - g[1][0] * b[0]) / det;
  } else if constexpr (D == 3) {
    auto det3 = [](const std::array<std::array<double, D>, D>& m) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    det = det3(g);
    for (int i = 0; i < 3; ++i) {
      auto m = g;
      for (int r = 0; r < 3; ++r) m[r][i] = b[r];
      lambda[i] = det3(m) / det;
    }
  }
  if (!(diag > 0.0) || !(det / diag > detail::kIllConditioned) || !std::isfinite(det))
    return detail::orthosphere_exact<D>(p, w, k);

  double r2 = -w[0];
  for (int c = 0; c < D; ++c) {
    double off = 0.0;
    for (int j = 0; j < k; ++j) off += lambda[j] * e[j][c];
    s.center[c] = p[0][c] + off;
    r2 += off * off;
  }
  s.radius2 = r2;
  return s;
}

}  // namespace phkit::geometry
