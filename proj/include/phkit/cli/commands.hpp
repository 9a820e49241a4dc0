#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phkit/alpha.hpp"
#include "phkit/cubical.hpp"
#include "phkit/cycles.hpp"
#include "phkit/diagram_distance.hpp"
#include "phkit/distance_transform.hpp"
#include "phkit/error.hpp"
#include "phkit/histogram.hpp"
#include "phkit/io/diagram_file.hpp"
#include "phkit/io/readers.hpp"
#include "phkit/io/svg_plot.hpp"
#include "phkit/persistence.hpp"
#include "phkit/persistence_image.hpp"
#include "phkit/rips.hpp"

namespace phkit::cli {

/// Exit status for an exception escaping a command: 2 for malformed input or
/// usage, 3 for failures of the computation itself.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvalidInput*>(&e) ||
      dynamic_cast<const BadDegree*>(&e) || dynamic_cast<const BadRange*>(&e) || dynamic_cast<const BadParams*>(&e) ||
      dynamic_cast<const NotDegreeOne*>(&e))
    return 2;
  return 3;
}

inline std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const std::vector<std::string>& input_kinds() {
  static const std::vector<std::string> kinds{"pointcloud", "pointcloud-weighted", "distance-matrix", "bitmap",
                                              "binary-bitmap"};
  return kinds;
}

inline bool is_pointcloud_kind(const std::string& kind) { return kind == "pointcloud" || kind == "pointcloud-weighted"; }

struct ComputeOptions {
  std::string input;
  std::string kind = "pointcloud";
  std::optional<int> maxdim;
  std::optional<double> max_value;
  bool squared = false;
  bool positive_inside = false;
  bool provenance = true;
};

/// A filtration rebuilt from an input file, with the point cloud kept for
/// coordinate listings.
struct Computation {
  std::optional<PointCloud> cloud;
  Filtration filtration;
  int max_degree = 0;
};

inline Computation build_filtration(const std::string& kind, const std::string& path, std::optional<int> maxdim,
                                    std::optional<double> max_value, bool positive_inside) {
  if (maxdim && *maxdim < 0) throw BadParams("--maxdim must be non-negative");
  Computation c;
  if (is_pointcloud_kind(kind)) {
    const bool weighted = kind == "pointcloud-weighted";
    c.cloud = io::read_point_cloud(path, weighted);
    c.filtration = weighted ? weighted_alpha_filtration(*c.cloud) : alpha_filtration(*c.cloud);
    c.max_degree = c.cloud->dimension() - 1;
  } else if (kind == "distance-matrix") {
    if (!max_value) throw TooLarge("Rips filtrations need --max-value to bound the complex");
    if (!(*max_value > 0)) throw BadParams("--max-value must be positive");
    const int degree = maxdim.value_or(1);
    c.filtration = rips_filtration(io::read_distance_matrix(path), degree + 1, *max_value);
    c.max_degree = degree;
  } else if (kind == "bitmap" || kind == "binary-bitmap") {
    GrayBitmap g = io::read_bitmap(path);
    if (kind == "binary-bitmap") {
      for (double v : g.values)
        if (v != 0.0 && v != 1.0) throw ParseError(0, "binary bitmaps hold 0/1 values only");
      g = distance_transform(io::to_binary(g), positive_inside);
    }
    c.filtration = cubical_filtration(g);
    c.max_degree = std::max(0, static_cast<int>(g.rank()) - 1);
  } else {
    throw InvalidInput("unknown input kind '" + kind + "'");
  }
  if (maxdim) c.max_degree = std::min(c.max_degree, *maxdim);
  return c;
}

inline io::DiagramFile cmd_compute(const ComputeOptions& opt) {
  if (opt.squared && !is_pointcloud_kind(opt.kind)) throw InvalidInput("--squared applies to point cloud inputs only");
  Computation c = build_filtration(opt.kind, opt.input, opt.maxdim, opt.max_value, opt.positive_inside);
  PersistenceResult r = compute_persistence(c.filtration);
  std::vector<PersistenceDiagram> diagrams;
  for (int k = 0; k <= c.max_degree; ++k)
    diagrams.push_back(k < static_cast<int>(r.diagrams.size()) ? r.diagram(k) : PersistenceDiagram{k, {}});

  io::DiagramFile::Metadata meta;
  meta.input_kind = opt.kind;
  meta.input_path = std::filesystem::absolute(opt.input).lexically_normal().string();
  meta.squared = is_pointcloud_kind(opt.kind) && opt.squared;
  meta.params = {{"maxdim", opt.maxdim ? nlohmann::json(*opt.maxdim) : nlohmann::json(nullptr)},
                 {"max_value", opt.max_value ? nlohmann::json(*opt.max_value) : nlohmann::json(nullptr)},
                 {"positive_inside", opt.positive_inside}};
  const bool unsquare_values = is_pointcloud_kind(opt.kind) && !opt.squared;
  return io::make_diagram_file(c.filtration, diagrams, std::move(meta), opt.provenance,
                               [&](double v) { return unsquare_values ? unsquare(v) : v; });
}

/// "birth death" lines sorted by (birth, death); essential pairs print "inf".
inline std::string cmd_pairs(const io::DiagramFile& file, int degree) {
  const auto pd = file.diagram(degree);
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : pd.points) pts.emplace_back(p.birth, p.death);
  std::sort(pts.begin(), pts.end());
  std::string out;
  for (const auto& [b, d] : pts) out += format_value(b) + " " + format_value(d) + "\n";
  return out;
}

inline std::string cmd_plot(const io::DiagramFile& file, int degree, double lo, double hi, std::size_t bins,
                            bool log_scale) {
  const auto h = histogram(file.diagram(degree), lo, hi, bins);
  io::PlotOptions opt;
  opt.log_scale = log_scale;
  opt.title = "PD" + std::to_string(degree);
  return io::render_svg(h, opt);
}

namespace detail {

inline std::string cell_text(const io::ProvenanceCell& c) {
  std::string s;
  if (c.cubical) {
    const Cube q = Cube::from_doubled(c.ids);
    s = "cube anchor";
    for (auto a : q.anchor) s += " " + std::to_string(a);
    s += " extent";
    for (auto e : q.extent) s += " " + std::to_string(e);
    return s;
  }
  s = "simplex";
  for (auto v : c.ids) s += " " + std::to_string(v);
  return s;
}

}  // namespace detail

/// Finds the finite pair nearest to (birth, death), recomputes its
/// representative cycle from the recorded input and lists its cells, plus
/// vertex coordinates for point clouds.
inline std::string cmd_invert(const io::DiagramFile& file, int degree, double birth, double death, bool tighten) {
  const auto& deg = file.degree(degree);
  if (deg.pairs.empty()) throw NoPairs();
  if (!deg.has_provenance) throw MissingProvenance();
  if (tighten && degree != 1) throw NotDegreeOne();
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < deg.pairs.size(); ++i) {
    const auto [b, d] = deg.pairs[i];
    const double dist = std::hypot(b - birth, d - death);
    const auto& cur = deg.pairs[best];
    if (dist < best_d || (dist == best_d && std::make_pair(b, d) < cur)) {
      best = i;
      best_d = dist;
    }
  }

  const auto& params = file.metadata.params;
  auto opt_int = [&](const char* k) -> std::optional<int> {
    if (!params.contains(k) || params[k].is_null()) return std::nullopt;
    return params[k].get<int>();
  };
  auto opt_double = [&](const char* k) -> std::optional<double> {
    if (!params.contains(k) || params[k].is_null()) return std::nullopt;
    return params[k].get<double>();
  };
  Computation c = build_filtration(file.metadata.input_kind, file.metadata.input_path, opt_int("maxdim"),
                                   opt_double("max_value"), params.value("positive_inside", false));
  const Filtration& f = c.filtration;
  PersistenceResult r = compute_persistence(f);
  const auto& [bcell, dcell] = deg.pair_cells[best];
  const auto bi = f.find(bcell.ids);
  const auto di = f.find(dcell.ids);
  if (!bi || !di || r.pairing.partner(*bi) != *di)
    throw InvalidInput("diagram file does not match its recorded input");

  RepresentativeCycle cyc = representative_cycle(r.pairing, *bi);
  if (tighten) cyc = tighten_cycle_1d(r.pairing, cyc);

  std::string out;
  out += "pair " + format_value(deg.pairs[best].first) + " " + format_value(deg.pairs[best].second) + "\n";
  out += "degree " + std::to_string(degree) + "\n";
  if (tighten) out += std::string("tightened same_class ") + (cyc.same_class ? "yes" : "no") + "\n";
  out += "cells " + std::to_string(cyc.cells.size()) + "\n";
  std::vector<std::uint32_t> verts;
  for (Index i : cyc.cells) {
    out += detail::cell_text(io::provenance_of(f, i)) + "\n";
    if (f.kind() == CellKind::simplicial)
      for (auto v : f.cell(i)) verts.push_back(v);
  }
  if (c.cloud) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    out += "vertices " + std::to_string(verts.size()) + "\n";
    for (auto v : verts) {
      out += std::to_string(v);
      for (double x : c.cloud->point(v)) out += " " + format_value(x);
      out += "\n";
    }
  }
  return out;
}

/// One CSV row per file: the persistence image of the chosen degree.
inline std::string cmd_vectorize(const std::vector<io::DiagramFile>& files, int degree, const ImageParams& params) {
  std::string out;
  for (const auto& file : files) {
    const auto img = persistence_image(file.diagram(degree), params);
    for (std::size_t i = 0; i < img.values.size(); ++i) {
      if (i) out += ",";
      out += format_value(img.values[i]);
    }
    out += "\n";
  }
  return out;
}

inline std::string cmd_distance(const io::DiagramFile& a, const io::DiagramFile& b, int degree,
                                const std::string& metric, double q) {
  const auto da = a.diagram(degree), db = b.diagram(degree);
  double v;
  if (metric == "bottleneck") v = bottleneck_distance(da, db).value;
  else if (metric == "wasserstein") v = wasserstein_distance(da, db, q).value;
  else throw BadParams("unknown metric '" + metric + "'");
  return format_value(v) + "\n";
}

}  // namespace phkit::cli
