#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "phkit/histogram.hpp"

namespace phkit::io {

struct PlotOptions {
  bool log_scale = false;
  std::string title;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Viridis-like ramp sampled at t in [0, 1].
inline std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                                {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto k = std::min<std::size_t>(3, static_cast<std::size_t>(t));
  const double u = t - static_cast<double>(k);
  char buf[8];
  std::array<int, 3> c;
  for (int i = 0; i < 3; ++i)
    c[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(stops[k][static_cast<std::size_t>(i)] * (1 - u) +
                                                                  stops[k + 1][static_cast<std::size_t>(i)] * u));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

}  // namespace detail

/// Renders a diagram histogram as a standalone SVG heatmap with the
/// diagonal, labelled axes and a color legend. Output depends only on the
/// inputs. Nonzero bins are <rect class="bin"> elements carrying data-count.
inline std::string render_svg(const DiagramHistogram& h, const PlotOptions& opt = {}) {
  using detail::fmt;
  const double plot = 480.0, left = 70.0, top = 40.0, legend_w = 20.0;
  const double width = left + plot + 100.0, height = top + plot + 60.0;
  const double cell = plot / static_cast<double>(h.bins);
  double vmax = 0.0;
  for (double c : h.counts) vmax = std::max(vmax, c);
  auto level = [&](double c) {
    if (vmax <= 0) return 0.0;
    return opt.log_scale ? std::log1p(c) / std::log1p(vmax) : c / vmax;
  };
  auto x_of = [&](double v) { return left + (v - h.lo) / (h.hi - h.lo) * plot; };
  auto y_of = [&](double v) { return top + plot - (v - h.lo) / (h.hi - h.lo) * plot; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%g", width) + "\" height=\"" + fmt("%g", height) +
       "\" viewBox=\"0 0 " + fmt("%g", width) + " " + fmt("%g", height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt("%g", width) + "\" height=\"" + fmt("%g", height) + "\" fill=\"#ffffff\"/>\n";
  if (!opt.title.empty())
    s += "<text x=\"" + fmt("%g", left + plot / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         detail::xml_escape(opt.title) + "</text>\n";
  s += "<rect class=\"frame\" x=\"" + fmt("%g", left) + "\" y=\"" + fmt("%g", top) + "\" width=\"" + fmt("%g", plot) +
       "\" height=\"" + fmt("%g", plot) + "\" fill=\"" + detail::ramp(0) + "\" fill-opacity=\"0.05\" stroke=\"#000000\"/>\n";

  s += "<g class=\"heatmap\">\n";
  for (std::size_t db = 0; db < h.bins; ++db)
    for (std::size_t bb = 0; bb < h.bins; ++bb) {
      const double c = h.count(bb, db);
      if (c == 0) continue;
      s += "<rect class=\"bin\" x=\"" + fmt("%.4f", left + cell * static_cast<double>(bb)) + "\" y=\"" +
           fmt("%.4f", top + plot - cell * static_cast<double>(db + 1)) + "\" width=\"" + fmt("%.4f", cell) +
           "\" height=\"" + fmt("%.4f", cell) + "\" fill=\"" + detail::ramp(level(c)) + "\" data-count=\"" +
           fmt("%.17g", c) + "\"/>\n";
    }
  s += "</g>\n";

  s += "<line class=\"diagonal\" x1=\"" + fmt("%g", x_of(h.lo)) + "\" y1=\"" + fmt("%g", y_of(h.lo)) + "\" x2=\"" +
       fmt("%g", x_of(h.hi)) + "\" y2=\"" + fmt("%g", y_of(h.hi)) + "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";

  s += "<g class=\"axes\" font-size=\"11\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = h.lo + (h.hi - h.lo) * t / 4.0;
    s += "<text x=\"" + fmt("%g", x_of(v)) + "\" y=\"" + fmt("%g", top + plot + 16) + "\" text-anchor=\"middle\">" +
         fmt("%.4g", v) + "</text>\n";
    s += "<text x=\"" + fmt("%g", left - 6) + "\" y=\"" + fmt("%g", y_of(v) + 4) + "\" text-anchor=\"end\">" +
         fmt("%.4g", v) + "</text>\n";
  }
  s += "<text x=\"" + fmt("%g", left + plot / 2) + "\" y=\"" + fmt("%g", top + plot + 40) +
       "\" text-anchor=\"middle\" font-size=\"13\">birth</text>\n";
  s += "<text x=\"20\" y=\"" + fmt("%g", top + plot / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 " +
       fmt("%g", top + plot / 2) + ")\">death</text>\n";
  s += "</g>\n";

  const double lx = left + plot + 30;
  s += std::string("<g class=\"legend\" data-scale=\"") + (opt.log_scale ? "log" : "linear") + "\" font-size=\"11\">\n";
  constexpr int steps = 32;
  for (int k = 0; k < steps; ++k) {
    const double t = (k + 0.5) / steps;
    s += "<rect x=\"" + fmt("%g", lx) + "\" y=\"" + fmt("%.4f", top + plot * (1.0 - (k + 1.0) / steps)) + "\" width=\"" +
         fmt("%g", legend_w) + "\" height=\"" + fmt("%.4f", plot / steps) + "\" fill=\"" + detail::ramp(t) + "\"/>\n";
  }
  s += "<text x=\"" + fmt("%g", lx + legend_w + 4) + "\" y=\"" + fmt("%g", top + 10) + "\">" + fmt("%.6g", vmax) + "</text>\n";
  s += "<text x=\"" + fmt("%g", lx + legend_w + 4) + "\" y=\"" + fmt("%g", top + plot) + "\">0</text>\n";
  s += "</g>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace phkit::io
