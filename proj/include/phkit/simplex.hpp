#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <unordered_set>
#include <vector>

#include "phkit/error.hpp"

namespace phkit {

using Vertex = std::uint32_t;

/// A simplex as its vertex set, kept sorted and duplicate-free.
class Simplex {
 public:
  Simplex() = default;
  Simplex(std::initializer_list<Vertex> vertices) : Simplex(std::vector<Vertex>(vertices)) {}
  explicit Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (vertices_.empty()) throw InvalidInput("a simplex needs at least one vertex");
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
      throw InvalidInput("simplex vertices must be distinct");
  }

  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }
  std::span<const Vertex> vertices() const { return vertices_; }
  const std::vector<Vertex>& vertex_vector() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Vertex operator[](std::size_t i) const { return vertices_[i]; }

  /// True when every vertex of this simplex is a vertex of `other`.
  bool is_face_of(const Simplex& other) const {
    return std::includes(other.vertices_.begin(), other.vertices_.end(), vertices_.begin(),
                         vertices_.end());
  }

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex& a, const Simplex& b) {
    return std::lexicographical_compare_three_way(a.vertices_.begin(), a.vertices_.end(),
                                                  b.vertices_.begin(), b.vertices_.end());
  }

 private:
  std::vector<Vertex> vertices_;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Vertex v : s.vertices()) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Codimension-one faces of `cell`, in lexicographic order. Empty for a vertex.
inline std::vector<Simplex> boundary(const Simplex& cell) {
  std::vector<Simplex> faces;
  if (cell.dimension() == 0) return faces;
  const auto& v = cell.vertex_vector();
  faces.reserve(v.size());
  // Dropping vertices back to front yields lexicographic order.
  for (std::size_t k = v.size(); k-- > 0;) {
    std::vector<Vertex> f;
    f.reserve(v.size() - 1);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (i != k) f.push_back(v[i]);
    faces.emplace_back(std::move(f));
  }
  return faces;
}

/// An abstract simplicial complex: a face-closed set of simplices.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  bool contains(const Simplex& s) const { return cells_.count(s) != 0; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  int dimension() const {
    int d = -1;
    for (const auto& s : cells_) d = std::max(d, s.dimension());
    return d;
  }

  std::size_t count(int dim) const {
    return static_cast<std::size_t>(std::count_if(
        cells_.begin(), cells_.end(), [dim](const Simplex& s) { return s.dimension() == dim; }));
  }

  /// Cells ordered by dimension, then lexicographically.
  std::vector<Simplex> sorted_cells() const {
    std::vector<Simplex> out(cells_.begin(), cells_.end());
    std::sort(out.begin(), out.end(), [](const Simplex& a, const Simplex& b) {
      if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
      return a < b;
    });
    return out;
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.cells_ == b.cells_;
  }

 private:
  friend SimplicialComplex make_complex(std::span<const Simplex> cells);
  std::unordered_set<Simplex, SimplexHash> cells_;
};

/// Face closure of `cells`.
inline SimplicialComplex make_complex(std::span<const Simplex> cells) {
  SimplicialComplex out;
  std::vector<Simplex> stack(cells.begin(), cells.end());
  while (!stack.empty()) {
    Simplex s = std::move(stack.back());
    stack.pop_back();
    if (out.cells_.count(s)) continue;
    for (auto& f : boundary(s))
      if (!out.cells_.count(f)) stack.push_back(std::move(f));
    out.cells_.insert(std::move(s));
  }
  return out;
}

inline SimplicialComplex make_complex(std::initializer_list<Simplex> cells) {
  return make_complex(std::span<const Simplex>(cells.begin(), cells.size()));
}

}  // namespace phkit
