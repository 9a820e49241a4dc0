#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/filtration.hpp"
#include "phkit/parallel.hpp"

namespace phkit {

struct WeightedEdge {
  Vertex i;
  Vertex j;
  double w;
};

/// Undirected graph on vertices 0..n-1 with real edge weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::size_t n, std::vector<WeightedEdge> edges) : n_(n), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
      if (e.i >= e.j) throw InvalidInput("edges must satisfy i < j");
      if (e.j >= n_) throw InvalidInput("edge endpoint " + std::to_string(e.j) + " out of range");
      if (!std::isfinite(e.w)) throw InvalidInput("edge weights must be finite");
    }
    std::vector<WeightedEdge> sorted = edges_;
    std::sort(sorted.begin(), sorted.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t k = 1; k < sorted.size(); ++k)
      if (sorted[k].i == sorted[k - 1].i && sorted[k].j == sorted[k - 1].j)
        throw InvalidInput("duplicate edge {" + std::to_string(sorted[k].i) + "," + std::to_string(sorted[k].j) + "}");
  }

  std::size_t size() const { return n_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<WeightedEdge> edges_;
};

/// Symmetric matrix of non-negative dissimilarities with zero diagonal. The
/// triangle inequality is not required.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<double> d) : n_(n), d_(std::move(d)) {
    if (d_.size() != n_ * n_) throw InvalidInput("distance matrix must be n x n");
    for (std::size_t i = 0; i < n_; ++i) {
      if (d_[i * n_ + i] != 0.0) throw InvalidInput("distance matrix diagonal must be zero");
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double a = d_[i * n_ + j];
        if (!std::isfinite(a) || a < 0) throw InvalidInput("distances must be finite and non-negative");
        if (a != d_[j * n_ + i]) throw InvalidInput("distance matrix is not symmetric");
      }
    }
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Flag complex of `g` up to dimension `max_dim`; a simplex enters at the
/// largest weight among its edges. Vertices enter at min(0, smallest weight),
/// so they precede every edge even when weights are negative.
inline Filtration clique_filtration(const WeightedGraph& g, int max_dim) {
  if (max_dim < 0) throw InvalidInput("max_dim must be non-negative");
  const std::size_t n = g.size();
  struct Nbr {
    Vertex v;
    double w;
  };
  // Higher-numbered neighbours of each vertex, ascending.
  std::vector<std::vector<Nbr>> up(n);
  double vertex_value = 0.0;
  for (const auto& e : g.edges()) {
    up[e.i].push_back({e.j, e.w});
    vertex_value = std::min(vertex_value, e.w);
  }
  for (auto& l : up) std::sort(l.begin(), l.end(), [](const Nbr& a, const Nbr& b) { return a.v < b.v; });
  auto weight = [&](Vertex a, Vertex b, double& w) {
    const auto& l = up[a];
    auto it = std::lower_bound(l.begin(), l.end(), b, [](const Nbr& x, Vertex v) { return x.v < v; });
    if (it == l.end() || it->v != b) return false;
    w = it->w;
    return true;
  };

  struct Out {
    std::vector<Vertex> verts;
    std::vector<std::uint8_t> sizes;
    std::vector<double> values;
  };
  std::vector<Out> per_vertex(n);
  parallel_for(n, [&](std::size_t root) {
    Out& out = per_vertex[root];
    std::vector<Vertex> clique{static_cast<Vertex>(root)};
    // Depth-first extension by common higher neighbours.
    struct Frame {
      std::vector<Nbr> cand;
      double value;
    };
    std::vector<Frame> stack;
    stack.push_back({up[root], vertex_value});
    std::vector<std::size_t> cursor{0};
    out.verts.push_back(static_cast<Vertex>(root));
    out.sizes.push_back(1);
    out.values.push_back(vertex_value);
    while (!stack.empty()) {
      Frame& top = stack.back();
      std::size_t& k = cursor.back();
      if (k >= top.cand.size() || static_cast<int>(clique.size()) > max_dim) {
        stack.pop_back();
        cursor.pop_back();
        clique.pop_back();
        continue;
      }
      const Nbr next = top.cand[k++];
      const double value = std::max(top.value, next.w);
      clique.push_back(next.v);
      out.verts.insert(out.verts.end(), clique.begin(), clique.end());
      out.sizes.push_back(static_cast<std::uint8_t>(clique.size()));
      out.values.push_back(value);
      Frame child{{}, value};
      for (std::size_t t = k; t < top.cand.size(); ++t) {
        double w = 0;
        if (weight(next.v, top.cand[t].v, w)) child.cand.push_back({top.cand[t].v, std::max(top.cand[t].w, w)});
      }
      stack.push_back(std::move(child));
      cursor.push_back(0);
    }
  });

  SimplicialFiltrationBuilder b;
  for (const auto& out : per_vertex) {
    std::size_t off = 0;
    for (std::size_t s = 0; s < out.sizes.size(); ++s) {
      b.add(std::span<const Vertex>(out.verts.data() + off, out.sizes[s]), out.values[s]);
      off += out.sizes[s];
    }
  }
  return std::move(b).build();
}

/// Vietoris-Rips filtration: the flag complex of all pairs at distance at
/// most `max_value`, with simplices valued by their diameter.
inline Filtration rips_filtration(const DistanceMatrix& d, int max_dim,
                                  double max_value = std::numeric_limits<double>::infinity()) {
  if (!(max_value > 0)) throw InvalidInput("max_value must be positive");
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      if (d(i, j) <= max_value) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), d(i, j)});
  return clique_filtration(WeightedGraph(d.size(), std::move(edges)), max_dim);
}

}  // namespace phkit
