#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/simplex.hpp"

namespace phkit {

/// Position of a cell in a filtration's total order.
using Index = std::uint32_t;
inline constexpr Index kNoIndex = std::numeric_limits<Index>::max();

enum class CellKind { simplicial, cubical };

/// Raw storage handed to the Filtration constructor. Cells must already be in
/// filtration order; boundaries hold ascending filtration indices.
struct FiltrationParts {
  CellKind kind = CellKind::simplicial;
  std::vector<double> values;
  std::vector<std::uint8_t> dims;
  std::vector<std::uint64_t> cell_offsets{0};
  std::vector<std::uint32_t> cell_data;
  std::vector<std::uint64_t> boundary_offsets{0};
  std::vector<Index> boundary_data;
  std::vector<std::size_t> shape;  // voxel extents, cubical only
};

/// A cell complex with one real value per cell, stored in filtration order:
/// ascending value, then ascending dimension, then lexicographic cell identity.
///
/// Cell identity is the sorted vertex list for simplices and the doubled grid
/// coordinates (2*anchor + extent per axis) for cubes. Immutable once built.
class Filtration {
 public:
  Filtration() = default;
  explicit Filtration(FiltrationParts parts) : p_(std::move(parts)) {
    for (auto d : p_.dims) max_dim_ = std::max(max_dim_, static_cast<int>(d));
  }

  CellKind kind() const { return p_.kind; }
  std::size_t size() const { return p_.values.size(); }
  bool empty() const { return p_.values.empty(); }
  int max_dimension() const { return max_dim_; }

  double value(Index i) const { return p_.values[i]; }
  int dimension(Index i) const { return p_.dims[i]; }
  std::span<const double> values() const { return p_.values; }

  std::span<const std::uint32_t> cell(Index i) const {
    return {p_.cell_data.data() + p_.cell_offsets[i],
            static_cast<std::size_t>(p_.cell_offsets[i + 1] - p_.cell_offsets[i])};
  }

  std::span<const Index> boundary(Index i) const {
    return {p_.boundary_data.data() + p_.boundary_offsets[i],
            static_cast<std::size_t>(p_.boundary_offsets[i + 1] - p_.boundary_offsets[i])};
  }

  /// Voxel extents of a cubical filtration; empty for simplicial ones.
  std::span<const std::size_t> shape() const { return p_.shape; }

  Simplex simplex(Index i) const {
    auto c = cell(i);
    return Simplex(std::vector<Vertex>(c.begin(), c.end()));
  }

  std::size_t count(int dim) const {
    return static_cast<std::size_t>(std::count(p_.dims.begin(), p_.dims.end(), dim));
  }

  /// Filtration index of the cell with the given identity. Linear scan.
  std::optional<Index> find(std::span<const std::uint32_t> id) const {
    for (Index i = 0; i < size(); ++i) {
      auto c = cell(i);
      if (std::equal(c.begin(), c.end(), id.begin(), id.end())) return i;
    }
    return std::nullopt;
  }

 private:
  FiltrationParts p_;
  int max_dim_ = -1;
};

namespace detail {

inline bool span_less(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::vector<std::uint32_t> to_vec(std::span<const std::uint32_t> s) {
  return {s.begin(), s.end()};
}

}  // namespace detail

/// Collects simplices with values, then sorts and validates them into a
/// Filtration. Used by every simplicial construction in the library.
class SimplicialFiltrationBuilder {
 public:
  void reserve(std::size_t cells, std::size_t vertex_entries) {
    values_.reserve(cells);
    offsets_.reserve(cells + 1);
    data_.reserve(vertex_entries);
  }

  /// `vertices` must be strictly increasing.
  void add(std::span<const Vertex> vertices, double value) {
    if (vertices.empty()) throw InvalidInput("a simplex needs at least one vertex");
    if (std::isnan(value)) throw InvalidInput("filtration value is NaN");
    for (std::size_t i = 1; i < vertices.size(); ++i)
      if (vertices[i - 1] >= vertices[i])
        throw InvalidInput("simplex vertices must be strictly increasing");
    data_.insert(data_.end(), vertices.begin(), vertices.end());
    offsets_.push_back(data_.size());
    values_.push_back(value);
  }

  void add(const Simplex& s, double value) { add(s.vertices(), value); }

  std::size_t size() const { return values_.size(); }

  Filtration build() && {
    const std::size_t n = values_.size();
    if (n >= kNoIndex) throw TooLarge("filtration exceeds the 32-bit index range");
    auto old_cell = [&](std::size_t i) {
      return std::span<const std::uint32_t>(data_.data() + offsets_[i],
                                            offsets_[i + 1] - offsets_[i]);
    };

    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (values_[a] != values_[b]) return values_[a] < values_[b];
      auto ca = old_cell(a), cb = old_cell(b);
      if (ca.size() != cb.size()) return ca.size() < cb.size();
      return detail::span_less(ca, cb);
    });

    FiltrationParts parts;
    parts.kind = CellKind::simplicial;
    parts.values.resize(n);
    parts.dims.resize(n);
    parts.cell_offsets.reserve(n + 1);
    parts.cell_data.reserve(data_.size());
    int max_dim = -1;
    for (std::size_t i = 0; i < n; ++i) {
      auto c = old_cell(order[i]);
      parts.values[i] = values_[order[i]];
      parts.dims[i] = static_cast<std::uint8_t>(c.size() - 1);
      max_dim = std::max(max_dim, static_cast<int>(c.size()) - 1);
      parts.cell_data.insert(parts.cell_data.end(), c.begin(), c.end());
      parts.cell_offsets.push_back(parts.cell_data.size());
    }
    std::vector<std::uint64_t>().swap(offsets_);
    std::vector<std::uint32_t>().swap(data_);
    std::vector<double>().swap(values_);
    std::vector<Index>().swap(order);

    auto cell = [&](Index i) {
      return std::span<const std::uint32_t>(parts.cell_data.data() + parts.cell_offsets[i],
                                            parts.cell_offsets[i + 1] - parts.cell_offsets[i]);
    };

    // Per-dimension lexicographic index for facet lookup.
    std::vector<std::vector<Index>> by_lex(static_cast<std::size_t>(max_dim + 1));
    for (Index i = 0; i < n; ++i) by_lex[parts.dims[i]].push_back(i);
    for (auto& level : by_lex) {
      std::sort(level.begin(), level.end(),
                [&](Index a, Index b) { return detail::span_less(cell(a), cell(b)); });
      for (std::size_t k = 1; k < level.size(); ++k) {
        auto a = cell(level[k - 1]), b = cell(level[k]);
        if (std::equal(a.begin(), a.end(), b.begin(), b.end()))
          throw DuplicateCell(detail::to_vec(a));
      }
    }

    parts.boundary_offsets.reserve(n + 1);
    std::vector<std::uint32_t> facet;
    std::vector<Index> faces;
    for (Index i = 0; i < n; ++i) {
      const int d = parts.dims[i];
      faces.clear();
      if (d > 0) {
        auto c = cell(i);
        const auto& level = by_lex[d - 1];
        for (std::size_t drop = 0; drop < c.size(); ++drop) {
          facet.clear();
          for (std::size_t k = 0; k < c.size(); ++k)
            if (k != drop) facet.push_back(c[k]);
          auto it = std::lower_bound(level.begin(), level.end(), facet,
                                     [&](Index a, const std::vector<std::uint32_t>& key) {
                                       return detail::span_less(cell(a), key);
                                     });
          if (it == level.end() || !std::equal(facet.begin(), facet.end(), cell(*it).begin(),
                                               cell(*it).end()))
            throw MissingFace(detail::to_vec(c), facet);
          if (parts.values[*it] > parts.values[i])
            throw MonotonicityViolation(detail::to_vec(c), facet);
          faces.push_back(*it);
        }
        std::sort(faces.begin(), faces.end());
      }
      parts.boundary_data.insert(parts.boundary_data.end(), faces.begin(), faces.end());
      parts.boundary_offsets.push_back(parts.boundary_data.size());
    }
    return Filtration(std::move(parts));
  }

 private:
  std::vector<double> values_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint32_t> data_;
};

/// Sorts weighted simplices into a filtration, checking that every face is
/// present and enters no later than its cofaces.
inline Filtration make_filtration(std::span<const std::pair<Simplex, double>> weighted_cells) {
  SimplicialFiltrationBuilder b;
  for (const auto& [s, v] : weighted_cells) b.add(s, v);
  return std::move(b).build();
}

inline Filtration make_filtration(std::initializer_list<std::pair<Simplex, double>> cells) {
  return make_filtration(std::span<const std::pair<Simplex, double>>(cells.begin(), cells.size()));
}

}  // namespace phkit
