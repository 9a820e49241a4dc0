#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "phkit/cubical.hpp"
#include "phkit/error.hpp"
#include "phkit/geometry/point_cloud.hpp"
#include "phkit/rips.hpp"

namespace phkit::io {

namespace detail {

inline bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

/// Splits on any of `seps`, dropping empty tokens.
inline std::vector<std::string_view> split(std::string_view line, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const std::size_t j = line.find_first_of(seps, i);
    const std::size_t end = j == std::string_view::npos ? line.size() : j;
    if (end > i) out.push_back(line.substr(i, end - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::ifstream open(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw ParseError(0, "cannot open " + path);
  return in;
}

}  // namespace detail

/// Point cloud text: one point per line, coordinates separated by spaces or
/// tabs; blank lines and lines starting with '#' are skipped. With `weighted`
/// the last column is the weight.
inline PointCloud read_point_cloud(std::istream& in, bool weighted) {
  std::vector<double> coords, weights;
  std::string line;
  std::size_t lineno = 0, cols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto toks = detail::split(t, " \t");
    if (cols == 0) {
      cols = toks.size();
      const std::size_t d = weighted ? cols - 1 : cols;
      if (d != 2 && d != 3)
        throw ParseError(lineno, "expected " + std::string(weighted ? "3 or 4" : "2 or 3") + " columns, got " +
                                     std::to_string(cols));
    } else if (toks.size() != cols) {
      throw ParseError(lineno, "expected " + std::to_string(cols) + " columns, got " + std::to_string(toks.size()));
    }
    for (std::size_t k = 0; k < toks.size(); ++k) {
      double v;
      if (!detail::parse_double(toks[k], v) || !std::isfinite(v))
        throw ParseError(lineno, "not a number: '" + std::string(toks[k]) + "'");
      (weighted && k + 1 == toks.size() ? weights : coords).push_back(v);
    }
  }
  if (cols == 0) throw ParseError(0, "no points in input");
  return PointCloud(static_cast<int>(weighted ? cols - 1 : cols), std::move(coords), std::move(weights));
}

inline PointCloud read_point_cloud(const std::string& path, bool weighted) {
  auto in = detail::open(path);
  return read_point_cloud(in, weighted);
}

/// CSV distance matrix: n rows of n comma-separated decimals.
inline DistanceMatrix read_distance_matrix(std::istream& in) {
  std::vector<double> d;
  std::string line;
  std::size_t lineno = 0, rows = 0, cols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto toks = detail::split(t, ",");
    if (rows == 0) cols = toks.size();
    else if (toks.size() != cols)
      throw ParseError(lineno, "expected " + std::to_string(cols) + " columns, got " + std::to_string(toks.size()));
    for (auto tok : toks) {
      double v;
      if (!detail::parse_double(detail::trim(tok), v)) throw ParseError(lineno, "not a number: '" + std::string(tok) + "'");
      d.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(0, "empty distance matrix");
  if (rows != cols) throw ParseError(0, "distance matrix is " + std::to_string(rows) + " x " + std::to_string(cols));
  try {
    return DistanceMatrix(rows, std::move(d));
  } catch (const InvalidInput& e) {
    throw ParseError(0, e.what());
  }
}

inline DistanceMatrix read_distance_matrix(const std::string& path) {
  auto in = detail::open(path);
  return read_distance_matrix(in);
}

/// PGM image (P2 or P5) as a grayscale bitmap of shape {height, width}.
inline GrayBitmap read_pgm(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") throw ParseError(1, "not a PGM file (expected P2 or P5)");
  auto next_int = [&](const char* what) {
    while (true) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      long v;
      if (!(in >> v) || v < 0) throw ParseError(0, std::string("bad PGM ") + what);
      return static_cast<std::size_t>(v);
    }
  };
  const std::size_t w = next_int("width"), h = next_int("height"), maxval = next_int("maxval");
  if (w == 0 || h == 0 || maxval == 0 || maxval > 65535) throw ParseError(0, "bad PGM header");
  std::vector<double> v(w * h);
  if (magic == "P2") {
    for (auto& x : v) x = static_cast<double>(next_int("pixel"));
  } else {
    in.get();  // single whitespace after maxval
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(w * h * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw ParseError(0, "truncated PGM data");
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = bytes == 1 ? raw[i] : static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1]);
  }
  return GrayBitmap({h, w}, std::move(v));
}

inline GrayBitmap read_pgm(const std::string& path) {
  auto in = detail::open(path, std::ios::in | std::ios::binary);
  return read_pgm(in);
}

/// "NDBITMAP v1" text: optional magic line, then the rank, the extents, and
/// the values in row-major order. '#' starts a comment line.
inline GrayBitmap read_ndbitmap(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> toks;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (first) {
      first = false;
      if (t.rfind("NDBITMAP", 0) == 0) {
        if (t != "NDBITMAP v1") throw ParseError(lineno, "unsupported bitmap version");
        continue;
      }
    }
    for (auto tok : detail::split(t, " \t")) toks.emplace_back(lineno, std::string(tok));
  }
  std::size_t pos = 0;
  auto number = [&](double& v) {
    if (pos >= toks.size()) throw ParseError(lineno, "unexpected end of bitmap");
    const auto& [ln, tok] = toks[pos++];
    if (!detail::parse_double(tok, v) || !std::isfinite(v)) throw ParseError(ln, "not a number: '" + tok + "'");
    return ln;
  };
  auto count = [&](const char* what) {
    double v;
    const std::size_t ln = number(v);
    if (v < 1 || v != std::floor(v)) throw ParseError(ln, std::string("bad ") + what);
    return static_cast<std::size_t>(v);
  };
  const std::size_t rank = count("rank");
  std::vector<std::size_t> shape(rank);
  std::size_t total = 1;
  for (auto& e : shape) total *= (e = count("extent"));
  std::vector<double> values(total);
  for (auto& x : values) number(x);
  if (pos != toks.size()) throw ParseError(toks[pos].first, "extra values after bitmap data");
  return GrayBitmap(std::move(shape), std::move(values));
}

inline GrayBitmap read_ndbitmap(const std::string& path) {
  auto in = detail::open(path);
  return read_ndbitmap(in);
}

/// Reads PGM files (by extension) or NDBITMAP text.
inline GrayBitmap read_bitmap(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "pgm") return read_pgm(path);
  }
  return read_ndbitmap(path);
}

/// Nonzero voxels become foreground.
inline BinaryBitmap to_binary(const GrayBitmap& g) {
  std::vector<std::uint8_t> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = g.values[i] != 0.0;
  return BinaryBitmap(g.shape, std::move(v));
}

}  // namespace phkit::io
