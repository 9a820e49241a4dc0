// phkit command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "phkit/cli/commands.hpp"

namespace {

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw phkit::ParseError(0, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace phkit;
  CLI::App app{"Persistent homology of point clouds, distance matrices and bitmaps"};
  app.require_subcommand(1);

  cli::ComputeOptions copt;
  std::string compute_out;
  int maxdim = -1;
  double max_value = 0;
  auto* compute = app.add_subcommand("compute", "compute persistence diagrams and write a diagram file");
  compute->add_option("input", copt.input, "input file")->required();
  compute->add_option("--kind", copt.kind, "input kind")->check(CLI::IsMember(cli::input_kinds()));
  auto* maxdim_opt = compute->add_option("--maxdim", maxdim, "highest homology degree to report");
  auto* maxval_opt = compute->add_option("--max-value", max_value, "Rips truncation distance");
  compute->add_flag("--squared", copt.squared, "keep squared radii for point clouds");
  compute->add_flag("--positive-inside", copt.positive_inside, "distance transform positive inside the foreground");
  bool no_prov = false;
  compute->add_flag("--no-provenance", no_prov, "omit birth/death cells from the file");
  compute->add_option("-o,--output", compute_out, "output diagram file")->required();

  std::string file, file_b, out_path;
  int degree = 0;
  auto* pairs = app.add_subcommand("pairs", "list birth-death pairs");
  pairs->add_option("file", file)->required();
  pairs->add_option("--degree", degree)->required();

  std::vector<double> range{0.0, 1.0};
  std::size_t bins = 64;
  bool log_scale = false;
  auto* plot = app.add_subcommand("plot", "render a diagram histogram as SVG");
  plot->add_option("file", file)->required();
  plot->add_option("--degree", degree)->required();
  plot->add_option("--range", range, "lo hi")->expected(2);
  plot->add_option("--bins", bins);
  plot->add_flag("--log", log_scale);
  plot->add_option("-o,--output", out_path);

  std::vector<double> nearest;
  bool tighten = false;
  auto* invert = app.add_subcommand("invert", "show the representative cycle of a pair");
  invert->add_option("file", file)->required();
  invert->add_option("--degree", degree)->required();
  invert->add_option("--nearest", nearest, "birth death")->expected(2)->required();
  invert->add_flag("--tighten", tighten);
  invert->add_option("-o,--output", out_path);

  std::vector<std::string> vec_files;
  std::vector<double> vrange;
  std::size_t vbins = 16;
  double sigma = 0, wmax = 0;
  auto* vectorize = app.add_subcommand("vectorize", "persistence image as one CSV row per file");
  vectorize->add_option("files", vec_files)->required();
  vectorize->add_option("--degree", degree)->required();
  vectorize->add_option("--range", vrange, "lo hi")->expected(2)->required();
  vectorize->add_option("--bins", vbins);
  auto* sigma_opt = vectorize->add_option("--sigma", sigma);
  auto* wmax_opt = vectorize->add_option("--wmax", wmax);
  vectorize->add_option("-o,--output", out_path);

  std::string metric = "bottleneck";
  double q = 1.0;
  auto* distance = app.add_subcommand("distance", "bottleneck or Wasserstein distance between two diagrams");
  distance->add_option("file_a", file)->required();
  distance->add_option("file_b", file_b)->required();
  distance->add_option("--degree", degree)->required();
  distance->add_option("--metric", metric)->check(CLI::IsMember({"bottleneck", "wasserstein"}));
  distance->add_option("--q", q);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compute) {
      if (*maxdim_opt) copt.maxdim = maxdim;
      if (*maxval_opt) copt.max_value = max_value;
      copt.provenance = !no_prov;
      io::save_diagram_file(cli::cmd_compute(copt), compute_out);
    } else if (*pairs) {
      write_output(cli::cmd_pairs(io::read_diagram_file(file), degree), "");
    } else if (*plot) {
      write_output(cli::cmd_plot(io::read_diagram_file(file), degree, range[0], range[1], bins, log_scale), out_path);
    } else if (*invert) {
      write_output(cli::cmd_invert(io::read_diagram_file(file), degree, nearest[0], nearest[1], tighten), out_path);
    } else if (*vectorize) {
      std::vector<io::DiagramFile> files;
      for (const auto& f : vec_files) files.push_back(io::read_diagram_file(f));
      ImageParams p;
      p.lo = vrange[0];
      p.hi = vrange[1];
      p.bins = vbins;
      if (*sigma_opt) p.sigma = sigma;
      if (*wmax_opt) p.w_max = wmax;
      write_output(cli::cmd_vectorize(files, degree, p), out_path);
    } else if (*distance) {
      write_output(cli::cmd_distance(io::read_diagram_file(file), io::read_diagram_file(file_b), degree, metric, q), "");
    }
  } catch (const std::exception& e) {
    std::cerr << "phkit: " << e.what() << "\n";
    return cli::exit_code_for(e);
  }
  return 0;
}
