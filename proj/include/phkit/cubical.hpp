#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "phkit/error.hpp"
#include "phkit/filtration.hpp"

namespace phkit {

/// Row-major array of voxel values (last axis fastest).
template <class T>
struct Bitmap {
  std::vector<std::size_t> shape;
  std::vector<T> values;

  Bitmap() = default;
  Bitmap(std::vector<std::size_t> extents, std::vector<T> data) : shape(std::move(extents)), values(std::move(data)) {
    if (shape.empty()) throw InvalidInput("bitmap needs at least one axis");
    std::size_t total = 1;
    for (auto e : shape) {
      if (e == 0) throw InvalidInput("bitmap extents must be positive");
      total *= e;
    }
    if (total != values.size())
      throw InvalidInput("bitmap has " + std::to_string(values.size()) + " values, expected " + std::to_string(total));
  }

  std::size_t rank() const { return shape.size(); }
  std::size_t size() const { return values.size(); }
};

using GrayBitmap = Bitmap<double>;
/// Nonzero voxels are foreground.
using BinaryBitmap = Bitmap<std::uint8_t>;

/// An axis-aligned cube of the voxel-corner grid: anchor corner plus a 0/1
/// extent per axis.
struct Cube {
  std::vector<std::size_t> anchor;
  std::vector<std::uint8_t> extent;

  int dimension() const { return static_cast<int>(std::count(extent.begin(), extent.end(), 1)); }

  /// Doubled coordinates 2*anchor + extent, the identity used in filtrations.
  std::vector<std::uint32_t> doubled() const {
    std::vector<std::uint32_t> c(anchor.size());
    for (std::size_t k = 0; k < anchor.size(); ++k) c[k] = static_cast<std::uint32_t>(2 * anchor[k] + extent[k]);
    return c;
  }
  static Cube from_doubled(std::span<const std::uint32_t> c) {
    Cube q;
    for (auto x : c) {
      q.anchor.push_back(x / 2);
      q.extent.push_back(static_cast<std::uint8_t>(x % 2));
    }
    return q;
  }

  friend bool operator==(const Cube&, const Cube&) = default;
};

/// Level-set filtration of a grayscale bitmap: voxels are the top cubes with
/// their gray values and every lower cube takes the minimum over the voxels
/// containing it.
inline Filtration cubical_filtration(const GrayBitmap& b) {
  for (double v : b.values)
    if (!std::isfinite(v)) throw InvalidInput("bitmap values must be finite");
  const std::size_t r = b.rank();
  std::vector<std::size_t> ext(r), stride(r);
  std::size_t total = 1;
  for (std::size_t k = r; k-- > 0;) {
    ext[k] = 2 * b.shape[k] + 1;
    stride[k] = total;
    total *= ext[k];
  }
  if (total >= kNoIndex) throw TooLarge("cubical complex exceeds the 32-bit index range");

  // Place voxel values at odd positions, then sweep each axis so that even
  // positions take the smaller of their odd neighbours.
  std::vector<double> val(total, std::numeric_limits<double>::infinity());
  {
    std::vector<std::size_t> idx(r, 0);
    for (std::size_t v = 0; v < b.size(); ++v) {
      std::size_t lin = 0;
      for (std::size_t k = 0; k < r; ++k) lin += (2 * idx[k] + 1) * stride[k];
      val[lin] = b.values[v];
      for (std::size_t k = r; k-- > 0;) {
        if (++idx[k] < b.shape[k]) break;
        idx[k] = 0;
      }
    }
  }
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t lin = 0; lin < total; ++lin) {
      const std::size_t c = (lin / stride[k]) % ext[k];
      if (c % 2 != 0) continue;
      double m = std::numeric_limits<double>::infinity();
      if (c > 0) m = std::min(m, val[lin - stride[k]]);
      if (c + 1 < ext[k]) m = std::min(m, val[lin + stride[k]]);
      val[lin] = m;
    }
  }

  std::vector<std::uint8_t> dim(total);
  for (std::size_t lin = 0; lin < total; ++lin) {
    int d = 0;
    for (std::size_t k = 0; k < r; ++k) d += static_cast<int>((lin / stride[k]) % ext[k] % 2);
    dim[lin] = static_cast<std::uint8_t>(d);
  }
  // Row-major linear order of doubled coordinates is their lexicographic order.
  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t c) {
    if (val[a] != val[c]) return val[a] < val[c];
    if (dim[a] != dim[c]) return dim[a] < dim[c];
    return a < c;
  });
  std::vector<Index> pos(total);
  for (std::size_t i = 0; i < total; ++i) pos[order[i]] = static_cast<Index>(i);

  FiltrationParts parts;
  parts.kind = CellKind::cubical;
  parts.shape = b.shape;
  parts.values.resize(total);
  parts.dims.resize(total);
  parts.cell_offsets.reserve(total + 1);
  parts.cell_data.reserve(total * r);
  parts.boundary_offsets.reserve(total + 1);
  std::vector<Index> faces;
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t lin = order[i];
    parts.values[i] = val[lin];
    parts.dims[i] = dim[lin];
    faces.clear();
    for (std::size_t k = 0; k < r; ++k) {
      const std::size_t c = (lin / stride[k]) % ext[k];
      parts.cell_data.push_back(static_cast<std::uint32_t>(c));
      if (c % 2 == 1) {
        faces.push_back(pos[lin - stride[k]]);
        faces.push_back(pos[lin + stride[k]]);
      }
    }
    std::sort(faces.begin(), faces.end());
    parts.cell_offsets.push_back(parts.cell_data.size());
    parts.boundary_data.insert(parts.boundary_data.end(), faces.begin(), faces.end());
    parts.boundary_offsets.push_back(parts.boundary_data.size());
  }
  return Filtration(std::move(parts));
}

/// Cube of a cubical filtration cell.
inline Cube cube_of(const Filtration& f, Index i) { return Cube::from_doubled(f.cell(i)); }

}  // namespace phkit
