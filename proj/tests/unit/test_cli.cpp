#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "phkit/cli/commands.hpp"

using namespace phkit;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kFixtures = PHKIT_FIXTURES;

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("phkit_cli_tests_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

io::DiagramFile compute(const std::string& input, const std::string& kind = "pointcloud", bool provenance = true) {
  cli::ComputeOptions o;
  o.input = input;
  o.kind = kind;
  o.provenance = provenance;
  return cli::cmd_compute(o);
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(text);
  std::string b, d;
  while (in >> b >> d) out.emplace_back(std::stod(b), d == "inf" ? std::numeric_limits<double>::infinity() : std::stod(d));
  return out;
}

#ifdef PHKIT_CLI
int run(const std::string& args) {
  const std::string cmd = std::string(PHKIT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace

TEST_CASE("point cloud reader", "[cli]") {
  std::istringstream ok("# comment\n0 0 0\n\n1 0 0\n0 1 0\n");
  const auto pc = io::read_point_cloud(ok, false);
  CHECK(pc.size() == 3);
  CHECK(pc.dimension() == 3);
  std::istringstream weighted("0 0 0.5\n1 0 0.25\n");
  const auto w = io::read_point_cloud(weighted, true);
  CHECK(w.dimension() == 2);
  CHECK(w.weight(1) == 0.25);
  std::istringstream bad("1.0 x 2.0\n");
  try {
    io::read_point_cloud(bad, false);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  std::istringstream ragged("0 0\n1 0 0\n");
  try {
    io::read_point_cloud(ragged, false);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(io::read_point_cloud(empty, false), ParseError);
  std::istringstream wide("0 0 0 0\n");
  CHECK_THROWS_AS(io::read_point_cloud(wide, false), ParseError);
  CHECK_THROWS_AS(io::read_point_cloud(std::string("/nonexistent/file.txt"), false), ParseError);
}

TEST_CASE("distance matrix reader", "[cli]") {
  const auto d = io::read_distance_matrix(kFixtures + "/square.csv");
  CHECK(d.size() == 4);
  CHECK(d(0, 2) == std::sqrt(2.0));
  std::istringstream asym("0,1\n2,0\n");
  CHECK_THROWS_AS(io::read_distance_matrix(asym), ParseError);
  std::istringstream ragged("0,1\n1\n");
  CHECK_THROWS_AS(io::read_distance_matrix(ragged), ParseError);
}

TEST_CASE("bitmap readers", "[cli]") {
  std::istringstream pgm("P2\n# tiny\n3 2\n9\n0 1 2\n3 4 9\n");
  const auto g = io::read_pgm(pgm);
  CHECK(g.shape == std::vector<std::size_t>{2, 3});
  CHECK(g.values == std::vector<double>{0, 1, 2, 3, 4, 9});
  std::istringstream nd("NDBITMAP v1\n3\n2 2 2\n0 1 0 1 1 1 0 0\n");
  const auto b = io::read_ndbitmap(nd);
  CHECK(b.shape == std::vector<std::size_t>{2, 2, 2});
  CHECK(b.values.size() == 8);
  std::istringstream short_nd("2 2\n0 1 0\n");
  CHECK_THROWS_AS(io::read_ndbitmap(short_nd), ParseError);
  const auto bin = io::to_binary(b);
  CHECK(bin.values == std::vector<std::uint8_t>{0, 1, 0, 1, 1, 1, 0, 0});
}

TEST_CASE("compute writes the tetrahedron loops", "[cli]") {
  const auto file = compute(kFixtures + "/tetrahedron.txt");
  CHECK(file.metadata.input_kind == "pointcloud");
  CHECK_FALSE(file.metadata.squared);
  const auto& d1 = file.degree(1);
  REQUIRE(d1.pairs.size() == 3);
  for (auto [b, d] : d1.pairs) {
    CHECK_THAT(b, WithinAbs(0.5, 1e-12));
    CHECK_THAT(d, WithinAbs(0.57735027, 1e-8));
  }
  CHECK(file.degrees.size() == 3);
}

TEST_CASE("compute on the square distance matrix", "[cli]") {
  cli::ComputeOptions o;
  o.input = kFixtures + "/square.csv";
  o.kind = "distance-matrix";
  o.maxdim = 2;
  o.max_value = 2.0;
  const auto file = cli::cmd_compute(o);
  REQUIRE(file.degree(1).pairs.size() == 1);
  CHECK(file.degree(1).pairs[0].first == 1.0);
  CHECK_THAT(file.degree(1).pairs[0].second, WithinAbs(1.41421356, 1e-8));
  o.max_value.reset();
  CHECK_THROWS_AS(cli::cmd_compute(o), TooLarge);
  o.max_value = 2.0;
  o.squared = true;
  CHECK_THROWS_AS(cli::cmd_compute(o), InvalidInput);
}

TEST_CASE("diagram file round trip", "[cli]") {
  const auto file = compute(kFixtures + "/octahedron.txt");
  const std::string text = io::write_diagram_file(file);
  std::istringstream in(text);
  const auto back = io::read_diagram_file(in);
  REQUIRE(back.degrees.size() == file.degrees.size());
  for (std::size_t k = 0; k < file.degrees.size(); ++k) {
    CHECK(back.degrees[k].pairs == file.degrees[k].pairs);
    CHECK(back.degrees[k].essential == file.degrees[k].essential);
    CHECK(back.degrees[k].pair_cells == file.degrees[k].pair_cells);
  }
  CHECK(io::write_diagram_file(back) == text);
  CHECK(cli::cmd_pairs(back, 1) == cli::cmd_pairs(file, 1));

  std::istringstream junk("{\"format\": \"other\"}");
  CHECK_THROWS_AS(io::read_diagram_file(junk), ParseError);
  std::istringstream broken("{not json");
  CHECK_THROWS_AS(io::read_diagram_file(broken), ParseError);
}

TEST_CASE("cubical provenance round trip", "[cli]") {
  const auto path = write_temp("ring.pgm", "P2\n3 3\n9\n0 0 0\n0 9 0\n0 0 0\n");
  const auto file = compute(path, "bitmap");
  const auto text = io::write_diagram_file(file);
  CHECK_THAT(text, ContainsSubstring("\"anchor\""));
  std::istringstream in(text);
  const auto back = io::read_diagram_file(in);
  CHECK(back.degree(1).pair_cells == file.degree(1).pair_cells);
  CHECK(back.degree(1).pairs == std::vector<std::pair<double, double>>{{0, 9}});
}

TEST_CASE("pairs prints sorted 17-digit values", "[cli]") {
  const auto file = compute(kFixtures + "/tetrahedron.txt");
  const auto text = cli::cmd_pairs(file, 2);
  const auto pairs = parse_pairs(text);
  REQUIRE(pairs.size() == 1);
  CHECK_THAT(pairs[0].first, WithinAbs(0.57735026918962584, 1e-15));
  CHECK_THAT(pairs[0].second, WithinAbs(0.61237243569579458, 1e-15));
  CHECK(text.find(' ') == 19);
  CHECK_THROWS_AS(cli::cmd_pairs(file, 5), BadDegree);
  const auto zero = cli::cmd_pairs(file, 0);
  CHECK_THAT(zero, ContainsSubstring("0 inf\n"));
}

TEST_CASE("empty degree prints nothing", "[cli]") {
  const auto path = write_temp("obtuse.txt", "0 0\n4 0\n2 0.5\n");
  const auto file = compute(path);
  CHECK(cli::cmd_pairs(file, 1).empty());
}

TEST_CASE("plot renders one bin for the tetrahedron loops", "[cli]") {
  const auto file = compute(kFixtures + "/tetrahedron.txt");
  const auto svg = cli::cmd_plot(file, 1, 0, 1, 256, false);
  std::size_t bins = 0, pos = 0;
  while ((pos = svg.find("class=\"bin\"", pos)) != std::string::npos) {
    ++bins;
    ++pos;
  }
  CHECK(bins == 1);
  CHECK_THAT(svg, ContainsSubstring("data-count=\"3\""));
  CHECK_THAT(svg, ContainsSubstring("<svg"));
  CHECK_THAT(svg, ContainsSubstring("</svg>"));
  CHECK_THAT(svg, ContainsSubstring("class=\"diagonal\""));
  CHECK_THROWS_AS(cli::cmd_plot(file, 1, 1, 1, 16, false), BadRange);
  const auto log = cli::cmd_plot(file, 1, 0, 1, 16, true);
  CHECK_THAT(log, ContainsSubstring("data-scale=\"log\""));
}

TEST_CASE("plot of an empty diagram is still an image", "[cli]") {
  const auto file = compute(write_temp("obtuse2.txt", "0 0\n4 0\n2 0.5\n"));
  const auto svg = cli::cmd_plot(file, 1, 0, 3, 32, false);
  CHECK(svg.find("class=\"bin\"") == std::string::npos);
  CHECK_THAT(svg, ContainsSubstring("</svg>"));
}

TEST_CASE("invert lists the cavity triangles", "[cli]") {
  const auto file = compute(kFixtures + "/tetrahedron.txt");
  const auto out = cli::cmd_invert(file, 2, 0.6, 0.6, false);
  CHECK_THAT(out, ContainsSubstring("cells 4\n"));
  CHECK_THAT(out, ContainsSubstring("simplex 0 1 2\n"));
  CHECK_THAT(out, ContainsSubstring("simplex 1 2 3\n"));
  CHECK_THAT(out, ContainsSubstring("vertices 4\n"));
  CHECK_THAT(out, ContainsSubstring("0 0.35355339059327379 0.35355339059327379 0.35355339059327379\n"));
  CHECK_THROWS_AS(cli::cmd_invert(file, 2, 0.6, 0.6, true), NotDegreeOne);
  const auto tight = cli::cmd_invert(file, 1, 0.5, 0.58, true);
  CHECK_THAT(tight, ContainsSubstring("cells 3\n"));
}

TEST_CASE("invert error paths", "[cli]") {
  const auto obtuse = compute(write_temp("obtuse3.txt", "0 0\n4 0\n2 0.5\n"));
  CHECK_THROWS_AS(cli::cmd_invert(obtuse, 1, 0, 0, false), NoPairs);
  const auto bare = compute(kFixtures + "/tetrahedron.txt", "pointcloud", false);
  CHECK_THROWS_AS(cli::cmd_invert(bare, 2, 0.6, 0.6, false), MissingProvenance);
}

TEST_CASE("invert on a bitmap names cubes", "[cli]") {
  const auto path = write_temp("ring2.pgm", "P2\n3 3\n9\n0 0 0\n0 9 0\n0 0 0\n");
  const auto file = compute(path, "bitmap");
  const auto out = cli::cmd_invert(file, 1, 0, 9, false);
  CHECK_THAT(out, ContainsSubstring("cells 4\n"));
  CHECK_THAT(out, ContainsSubstring("cube anchor"));
}

TEST_CASE("vectorize rows", "[cli]") {
  const auto tet = compute(kFixtures + "/tetrahedron.txt");
  const auto oct = compute(kFixtures + "/octahedron.txt");
  ImageParams p;
  p.lo = 0;
  p.hi = 1;
  p.bins = 8;
  const auto csv = cli::cmd_vectorize({tet, oct}, 1, p);
  std::istringstream in(csv);
  std::string a, b;
  std::getline(in, a);
  std::getline(in, b);
  CHECK(std::count(a.begin(), a.end(), ',') == 63);
  CHECK(std::count(b.begin(), b.end(), ',') == 63);
  const auto obtuse = compute(write_temp("obtuse4.txt", "0 0\n4 0\n2 0.5\n"));
  const auto zeros = cli::cmd_vectorize({obtuse}, 1, p);
  std::string expect = "0";
  for (int i = 0; i < 63; ++i) expect += ",0";
  CHECK(zeros == expect + "\n");
}

TEST_CASE("distance between fixtures", "[cli]") {
  const auto tet = compute(kFixtures + "/tetrahedron.txt");
  const auto oct = compute(kFixtures + "/octahedron.txt");
  CHECK(cli::cmd_distance(tet, tet, 1, "bottleneck", 1) == "0\n");
  const double d = std::stod(cli::cmd_distance(tet, oct, 2, "bottleneck", 1));
  // Sending both cavities to the diagonal beats matching them to each other.
  CHECK_THAT(d, WithinAbs((1 / std::sqrt(2.0) - 1 / std::sqrt(3.0)) / 2, 1e-12));
  const double w = std::stod(cli::cmd_distance(tet, oct, 2, "wasserstein", 1));
  CHECK_THAT(w, WithinAbs((1 / std::sqrt(2.0) - 1 / std::sqrt(3.0)) / 2 + (std::sqrt(3.0 / 8) - 1 / std::sqrt(3.0)) / 2, 1e-12));
  CHECK_THAT(std::stod(cli::cmd_distance(tet, oct, 0, "bottleneck", 1)), WithinAbs(0.25, 1e-12));
  CHECK_THROWS_AS(cli::cmd_distance(tet, oct, 1, "cosine", 1), BadParams);
  CHECK_THROWS_AS(cli::cmd_distance(tet, oct, 1, "wasserstein", 0.5), BadParams);
}

TEST_CASE("exit codes map error classes", "[cli]") {
  CHECK(cli::exit_code_for(ParseError(1, "x")) == 2);
  CHECK(cli::exit_code_for(BadDegree(3)) == 2);
  CHECK(cli::exit_code_for(BadRange("x")) == 2);
  CHECK(cli::exit_code_for(DegenerateInput("x")) == 3);
  CHECK(cli::exit_code_for(NoPairs()) == 3);
  CHECK(cli::exit_code_for(MissingProvenance()) == 3);
  CHECK(cli::exit_code_for(TooLarge("x")) == 3);
}

#ifdef PHKIT_CLI
TEST_CASE("command-line exit statuses", "[cli]") {
  const auto dir = scratch_dir();
  const std::string tet = kFixtures + "/tetrahedron.txt";
  const std::string out = (dir / "tet.json").string();
  CHECK(run("compute " + tet + " -o " + out) == 0);
  CHECK(run("pairs " + out + " --degree 1") == 0);
  CHECK(run("pairs " + out + " --degree 7") == 2);
  CHECK(run("plot " + out + " --degree 1 --range 1 0") == 2);
  CHECK(run("invert " + out + " --degree 2 --nearest 0.6 0.6") == 0);
  CHECK(run("frobnicate") == 2);
  CHECK(run("pairs") == 2);
  CHECK(run("compute /nonexistent.txt -o " + out + ".x") == 2);
  const auto bad = write_temp("bad.txt", "1.0 x 2.0\n");
  CHECK(run("compute " + bad + " -o " + out + ".y") == 2);
  const auto line = write_temp("line.txt", "0 0\n1 1\n2 2\n");
  CHECK(run("compute " + line + " -o " + out + ".z") == 3);
  CHECK(run("compute " + kFixtures + "/square.csv --kind distance-matrix -o " + out + ".w") == 3);
  CHECK(run("--help") == 0);
}
#endif
