#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "phkit/cubical.hpp"
#include "phkit/error.hpp"
#include "phkit/filtration.hpp"
#include "phkit/persistence.hpp"

namespace phkit::io {

inline constexpr const char* kDiagramFormat = "phkit-diagram";
inline constexpr const char* kDiagramVersion = "1";

/// A cell recorded in a diagram file: sorted vertices, or doubled grid
/// coordinates for cubes.
struct ProvenanceCell {
  bool cubical = false;
  std::vector<std::uint32_t> ids;
  friend bool operator==(const ProvenanceCell&, const ProvenanceCell&) = default;
};

struct DiagramFile {
  struct Metadata {
    std::string input_kind;
    std::string input_path;
    bool squared = false;
    nlohmann::json params = nlohmann::json::object();
  };
  struct Degree {
    int degree = 0;
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> essential;
    bool has_provenance = false;
    std::vector<std::pair<ProvenanceCell, ProvenanceCell>> pair_cells;
    std::vector<ProvenanceCell> essential_cells;
  };

  std::string version = kDiagramVersion;
  Metadata metadata;
  std::vector<Degree> degrees;

  const Degree& degree(int k) const {
    for (const auto& d : degrees)
      if (d.degree == k) return d;
    throw BadDegree(k);
  }

  /// The stored pairs of one degree as a diagram (no filtration indices).
  PersistenceDiagram diagram(int k) const {
    const Degree& d = degree(k);
    PersistenceDiagram pd;
    pd.degree = k;
    for (const auto& [b, de] : d.pairs) pd.points.push_back({b, de});
    for (double b : d.essential) pd.points.push_back({b, std::numeric_limits<double>::infinity()});
    return pd;
  }
};

inline ProvenanceCell provenance_of(const Filtration& f, Index i) {
  auto c = f.cell(i);
  return {f.kind() == CellKind::cubical, {c.begin(), c.end()}};
}

/// Builds a file from computed diagrams; `value` maps stored values (for
/// instance to unsquared radii).
template <class ValueFn>
DiagramFile make_diagram_file(const Filtration& f, const std::vector<PersistenceDiagram>& diagrams,
                              DiagramFile::Metadata meta, bool provenance, ValueFn&& value) {
  DiagramFile file;
  file.metadata = std::move(meta);
  for (const auto& pd : diagrams) {
    DiagramFile::Degree d;
    d.degree = pd.degree;
    d.has_provenance = provenance;
    for (const auto& p : pd.points) {
      if (p.essential()) {
        d.essential.push_back(value(p.birth));
        if (provenance) d.essential_cells.push_back(provenance_of(f, p.birth_cell));
      } else {
        d.pairs.emplace_back(value(p.birth), value(p.death));
        if (provenance) d.pair_cells.emplace_back(provenance_of(f, p.birth_cell), provenance_of(f, p.death_cell));
      }
    }
    file.degrees.push_back(std::move(d));
  }
  return file;
}

namespace detail {

inline nlohmann::json cell_json(const ProvenanceCell& c) {
  if (!c.cubical) return c.ids;
  nlohmann::json anchor = nlohmann::json::array(), extent = nlohmann::json::array();
  for (auto x : c.ids) {
    anchor.push_back(x / 2);
    extent.push_back(x % 2);
  }
  return {{"anchor", anchor}, {"extent", extent}};
}

inline ProvenanceCell cell_from_json(const nlohmann::json& j) {
  ProvenanceCell c;
  if (j.is_array()) {
    c.ids = j.get<std::vector<std::uint32_t>>();
    return c;
  }
  c.cubical = true;
  const auto anchor = j.at("anchor").get<std::vector<std::uint32_t>>();
  const auto extent = j.at("extent").get<std::vector<std::uint32_t>>();
  if (anchor.size() != extent.size()) throw ParseError(0, "cube anchor and extent differ in length");
  for (std::size_t k = 0; k < anchor.size(); ++k) c.ids.push_back(2 * anchor[k] + extent[k]);
  return c;
}

}  // namespace detail

inline std::string write_diagram_file(const DiagramFile& file) {
  nlohmann::json j;
  j["format"] = kDiagramFormat;
  j["version"] = file.version;
  j["metadata"] = {{"input_kind", file.metadata.input_kind},
                   {"input_path", file.metadata.input_path},
                   {"squared", file.metadata.squared},
                   {"params", file.metadata.params}};
  nlohmann::json degrees = nlohmann::json::array();
  for (const auto& d : file.degrees) {
    nlohmann::json dj;
    dj["degree"] = d.degree;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [b, de] : d.pairs) pairs.push_back({b, de});
    dj["pairs"] = pairs;
    dj["essential"] = d.essential;
    if (d.has_provenance) {
      nlohmann::json prov = nlohmann::json::array();
      for (const auto& [bc, dc] : d.pair_cells) prov.push_back({{"birth", detail::cell_json(bc)}, {"death", detail::cell_json(dc)}});
      nlohmann::json eprov = nlohmann::json::array();
      for (const auto& c : d.essential_cells) eprov.push_back(detail::cell_json(c));
      dj["provenance"] = {{"pairs", prov}, {"essential", eprov}};
    }
    degrees.push_back(dj);
  }
  j["degrees"] = degrees;
  return j.dump(1) + "\n";
}

inline DiagramFile read_diagram_file(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("diagram file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kDiagramFormat) throw ParseError(0, "not a phkit diagram file");
    DiagramFile f;
    f.version = j.at("version").get<std::string>();
    if (f.version != kDiagramVersion) throw ParseError(0, "unsupported diagram file version " + f.version);
    const auto& m = j.at("metadata");
    f.metadata.input_kind = m.at("input_kind").get<std::string>();
    f.metadata.input_path = m.at("input_path").get<std::string>();
    f.metadata.squared = m.at("squared").get<bool>();
    f.metadata.params = m.value("params", nlohmann::json::object());
    for (const auto& dj : j.at("degrees")) {
      DiagramFile::Degree d;
      d.degree = dj.at("degree").get<int>();
      for (const auto& p : dj.at("pairs")) d.pairs.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      d.essential = dj.at("essential").get<std::vector<double>>();
      if (dj.contains("provenance")) {
        d.has_provenance = true;
        const auto& pj = dj["provenance"];
        for (const auto& c : pj.at("pairs"))
          d.pair_cells.emplace_back(detail::cell_from_json(c.at("birth")), detail::cell_from_json(c.at("death")));
        for (const auto& c : pj.at("essential")) d.essential_cells.push_back(detail::cell_from_json(c));
        if (d.pair_cells.size() != d.pairs.size() || d.essential_cells.size() != d.essential.size())
          throw ParseError(0, "provenance does not match the pairs");
      }
      f.degrees.push_back(std::move(d));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed diagram file: ") + e.what());
  }
}

inline DiagramFile read_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_diagram_file(in);
}

inline void save_diagram_file(const DiagramFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(0, "cannot write " + path);
  out << write_diagram_file(file);
}

}  // namespace phkit::io
