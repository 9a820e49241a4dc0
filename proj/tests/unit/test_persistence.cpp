#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "phkit/alpha.hpp"
#include "phkit/betti.hpp"
#include "phkit/cubical.hpp"
#include "phkit/cycles.hpp"
#include "phkit/oracle.hpp"
#include "phkit/persistence.hpp"
#include "phkit/rips.hpp"
#include "support/oracles.hpp"

using namespace phkit;
using Catch::Matchers::WithinAbs;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

PointCloud tetrahedron(double a = 1.0) {
  const double s = a * std::sqrt(2.0) / 4;
  return PointCloud(3, {s, s, s, s, -s, -s, -s, s, -s, -s, -s, s});
}

PointCloud octahedron(double a = 1.0) {
  const double h = a / std::sqrt(2.0);
  return PointCloud(3, {h, 0, 0, -h, 0, 0, 0, h, 0, 0, -h, 0, 0, 0, h, 0, 0, -h});
}

PersistenceDiagram unsquared(const PersistenceDiagram& d) { return transform_values(d, unsquare); }

void check_pairs(const PersistenceDiagram& d, std::size_t count, double birth, double death, double tol = 1e-9) {
  REQUIRE(d.points.size() == count);
  for (const auto& p : d.points) {
    CHECK_THAT(p.birth, WithinAbs(birth, tol));
    if (std::isinf(death)) CHECK(p.essential());
    else CHECK_THAT(p.death, WithinAbs(death, tol));
  }
}

/// The tetrahedron 1-skeleton (Fig. 3 style) with all cells at value 0.
std::vector<std::pair<Simplex, double>> skeleton() {
  std::vector<std::pair<Simplex, double>> c;
  for (Vertex v = 0; v < 4; ++v) c.push_back({Simplex{v}, 0.0});
  for (Vertex a = 0; a < 4; ++a)
    for (Vertex b = a + 1; b < 4; ++b) c.push_back({Simplex{a, b}, 0.0});
  return c;
}

/// Square 0-1-2-3 with a midpoint vertex 4 joined to 0 and 2; triangles fill
/// the two halves one after another. Values are the step index (a)..(e) = 0..4.
Filtration stepwise_square() {
  return make_filtration({{Simplex{0}, 0.0},
                          {Simplex{1}, 0.0},
                          {Simplex{2}, 0.0},
                          {Simplex{3}, 0.0},
                          {Simplex{4}, 0.0},
                          {Simplex{0, 1}, 0.0},
                          {Simplex{1, 2}, 0.0},
                          {Simplex{2, 3}, 0.0},
                          {Simplex{0, 3}, 1.0},
                          {Simplex{0, 4}, 2.0},
                          {Simplex{2, 4}, 2.0},
                          {Simplex{1, 4}, 3.0},
                          {Simplex{0, 1, 4}, 3.0},
                          {Simplex{1, 2, 4}, 3.0},
                          {Simplex{3, 4}, 4.0},
                          {Simplex{0, 3, 4}, 4.0},
                          {Simplex{2, 3, 4}, 4.0}});
}

std::size_t prefix_at(const Filtration& f, double v) {
  std::size_t k = 0;
  while (k < f.size() && f.value(static_cast<Index>(k)) <= v) ++k;
  return k;
}

void check_equal_to_oracle(const Filtration& f) {
  const auto r = compute_persistence(f);
  const auto o = oracle_persistence(f);
  const std::size_t top = std::max(r.diagrams.size(), o.size());
  for (std::size_t k = 0; k < top; ++k) {
    const auto a = k < r.diagrams.size() ? oracle::multiset(r.diagrams[k]) : std::vector<oracle::Pair>{};
    const auto b = k < o.size() ? oracle::multiset(o[k]) : std::vector<oracle::Pair>{};
    CHECK(a == b);
  }
}

}  // namespace

TEST_CASE("regular tetrahedron diagrams", "[persistence]") {
  for (double a : {1.0, 2.5}) {
    const auto r = compute_persistence(alpha_filtration(tetrahedron(a)));
    REQUIRE(r.diagrams.size() == 4);
    CHECK(r.diagram(3).points.empty());
    const auto pd0 = unsquared(r.diagram(0));
    CHECK(pd0.essential_births() == std::vector<double>{0.0});
    check_pairs(PersistenceDiagram{0, pd0.finite()}, 3, 0.0, a / 2);
    check_pairs(unsquared(r.diagram(1)), 3, a / 2, a / std::sqrt(3.0));
    check_pairs(unsquared(r.diagram(2)), 1, a / std::sqrt(3.0), a * std::sqrt(3.0 / 8));
  }
}

TEST_CASE("regular octahedron diagrams", "[persistence]") {
  const auto r = compute_persistence(alpha_filtration(octahedron()));
  check_pairs(unsquared(r.diagram(1)), 7, 0.5, 1 / std::sqrt(3.0));
  check_pairs(unsquared(r.diagram(2)), 1, 1 / std::sqrt(3.0), 1 / std::sqrt(2.0));
  CHECK(r.diagram(0).points.size() == 6);
  CHECK(r.diagram(3).points.empty());
  CHECK_THROWS_AS(r.diagram(4), BadDegree);
}

TEST_CASE("diagram points carry their cells", "[persistence]") {
  const auto f = alpha_filtration(tetrahedron());
  const auto r = compute_persistence(f);
  for (const auto& d : r.diagrams)
    for (const auto& p : d.points) {
      CHECK(f.dimension(p.birth_cell) == d.degree);
      CHECK(f.value(p.birth_cell) == p.birth);
      if (!p.essential()) {
        CHECK(f.dimension(p.death_cell) == d.degree + 1);
        CHECK(f.value(p.death_cell) == p.death);
        CHECK(r.pairing.partner(p.birth_cell) == p.death_cell);
      }
    }
}

TEST_CASE("tetrahedron skeleton has three independent rings", "[persistence]") {
  CHECK(betti_numbers(make_filtration(skeleton())) == std::vector<int>{1, 3});
}

TEST_CASE("filling one face leaves two holes", "[persistence]") {
  auto cells = skeleton();
  cells.push_back({Simplex{0, 1, 2}, 0.0});
  const auto b = betti_numbers(make_filtration(cells));
  CHECK(b[1] == 2);
  CHECK(b[2] == 0);
}

TEST_CASE("full tetrahedron is contractible", "[persistence]") {
  const auto b = betti_numbers(make_complex({Simplex{0, 1, 2, 3}}));
  CHECK(b == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("hollow tetrahedron encloses a cavity", "[persistence]") {
  const auto b = betti_numbers(make_complex({Simplex{0, 1, 2}, Simplex{0, 1, 3}, Simplex{0, 2, 3}, Simplex{1, 2, 3}}));
  CHECK(b == std::vector<int>{1, 0, 1});
}

TEST_CASE("stepwise square: hole counts and intervals", "[persistence]") {
  const auto f = stepwise_square();
  std::vector<int> holes;
  for (double step = 0; step <= 4; step += 1) {
    const auto b = betti_numbers(f, prefix_at(f, step));
    holes.push_back(b.size() > 1 ? b[1] : 0);
  }
  CHECK(holes == std::vector<int>{0, 1, 2, 1, 0});
  const auto r = compute_persistence(f);
  CHECK(oracle::multiset(r.diagram(1)) == std::vector<oracle::Pair>{{1, 4}, {2, 3}});
}

TEST_CASE("reduction options agree", "[persistence]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = alpha_filtration(PointCloud(3, oracle::uniform_points(rng, 60, 3)));
    const auto base = compute_persistence(f);
    for (bool clearing : {false, true})
      for (bool uf : {false, true})
        for (bool track : {false, true}) {
          const auto r = compute_persistence(f, {clearing, uf, track});
          REQUIRE(r.diagrams.size() == base.diagrams.size());
          for (std::size_t k = 0; k < r.diagrams.size(); ++k)
            CHECK(oracle::multiset(r.diagrams[k]) == oracle::multiset(base.diagrams[k]));
          for (Index i = 0; i < f.size(); ++i) CHECK(r.pairing.partner(i) == base.pairing.partner(i));
        }
  }
}

TEST_CASE("oracle edge cases", "[persistence]") {
  const auto empty = oracle_persistence(make_filtration(std::initializer_list<std::pair<Simplex, double>>{}));
  for (const auto& d : empty) CHECK(d.points.empty());
  const auto one = oracle_persistence(make_filtration({{Simplex{0}, 2.5}}));
  REQUIRE(!one.empty());
  CHECK(oracle::multiset(one[0]) == std::vector<oracle::Pair>{{2.5, kInf}});
  const auto r = compute_persistence(make_filtration({{Simplex{0}, 2.5}}));
  CHECK(oracle::multiset(r.diagram(0)) == std::vector<oracle::Pair>{{2.5, kInf}});

  SimplicialFiltrationBuilder big;
  for (Vertex v = 0; v <= kOracleCellLimit; ++v) big.add(Simplex{v}, 0.0);
  CHECK_THROWS_AS(oracle_persistence(std::move(big).build()), TooLarge);
}

TEST_CASE("reduction agrees with the persistent Betti oracle", "[persistence]") {
  std::mt19937_64 rng(43);
  SECTION("alpha") {
    for (int trial = 0; trial < 20; ++trial) {
      const int dim = 2 + trial % 2;
      const auto f = alpha_filtration(PointCloud(dim, oracle::uniform_points(rng, 9, dim)));
      if (f.size() > kOracleCellLimit) continue;
      check_equal_to_oracle(f);
    }
  }
  SECTION("rips with ties") {
    std::uniform_int_distribution<int> u(1, 5);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 6;
      std::vector<double> d(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = u(rng);
      check_equal_to_oracle(rips_filtration(DistanceMatrix(n, d), 3));
    }
  }
  SECTION("bitmaps") {
    std::uniform_int_distribution<int> u(0, 6);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v(16);
      for (auto& x : v) x = u(rng);
      check_equal_to_oracle(cubical_filtration(GrayBitmap({4, 4}, v)));
    }
  }
}

TEST_CASE("betti numbers agree with diagrams at every prefix", "[persistence]") {
  std::mt19937_64 rng(47);
  const auto f = alpha_filtration(PointCloud(2, oracle::uniform_points(rng, 30, 2)));
  const auto r = compute_persistence(f);
  for (std::size_t prefix = 1; prefix <= f.size(); prefix += 7) {
    const double t = f.value(static_cast<Index>(prefix - 1));
    const std::size_t full = prefix_at(f, t);
    const auto b = betti_numbers(f, full);
    for (int k = 0; k < static_cast<int>(b.size()); ++k) {
      int alive = 0;
      for (const auto& p : r.diagram(k).points) alive += p.birth <= t && t < p.death;
      CHECK(b[static_cast<std::size_t>(k)] == alive);
    }
  }
}

TEST_CASE("representative of the tetrahedron cavity", "[persistence]") {
  const auto f = alpha_filtration(tetrahedron());
  const auto r = compute_persistence(f);
  const auto& p = r.diagram(2).points.at(0);
  const auto cyc = representative_cycle(r.pairing, p);
  CHECK(cyc.degree == 2);
  REQUIRE(cyc.cells.size() == 4);
  for (Index c : cyc.cells) CHECK(f.dimension(c) == 2);
  CHECK(chain_boundary(f, cyc.cells).empty());
  CHECK(cyc.birth == p.birth);
  CHECK(cyc.death == p.death);
}

TEST_CASE("representative of the square Rips loop", "[persistence]") {
  const double s = std::sqrt(2.0);
  const auto f = rips_filtration(DistanceMatrix(4, {0, 1, s, 1, 1, 0, 1, s, s, 1, 0, 1, 1, s, 1, 0}), 2);
  const auto r = compute_persistence(f);
  const auto cyc = representative_cycle(r.pairing, r.diagram(1).points.at(0));
  REQUIRE(cyc.cells.size() == 4);
  for (Index c : cyc.cells) CHECK(f.value(c) == 1.0);
  const auto tight = tighten_cycle_1d(r.pairing, cyc);
  CHECK(tight.cells == cyc.cells);
  CHECK(tight.same_class);
}

TEST_CASE("degree-0 representative is the younger vertex", "[persistence]") {
  const auto f = rips_filtration(DistanceMatrix(2, {0, 3, 3, 0}), 1);
  const auto r = compute_persistence(f);
  const auto pt = r.diagram(0).finite().at(0);
  const auto cyc = representative_cycle(r.pairing, pt);
  CHECK(cyc.cells == std::vector<Index>{pt.birth_cell});
  CHECK(cyc.degree == 0);
  CHECK_THROWS_AS(tighten_cycle_1d(r.pairing, cyc), NotDegreeOne);
}

TEST_CASE("essential classes need opt-in", "[persistence]") {
  const auto f = make_filtration(skeleton());
  const auto r = compute_persistence(f);
  const auto ess = r.diagram(1).points.at(0);
  REQUIRE(ess.essential());
  CHECK_THROWS_AS(representative_cycle(r.pairing, ess), EssentialPair);
  CHECK_THROWS_AS(representative_cycle(r.pairing, ess, true), InvalidInput);
  const auto t = compute_persistence(f, {true, true, true});
  CHECK(t.pairing.tracks_essential_cycles());
  for (const auto& p : t.diagram(1).points) {
    const auto cyc = representative_cycle(t.pairing, p, true);
    CHECK(cyc.cells.size() == 3);
    CHECK(chain_boundary(f, cyc.cells).empty());
  }
  const std::vector<std::uint32_t> edge{0, 1};
  CHECK_THROWS_AS(representative_cycle(r.pairing, *f.find(edge)), InvalidInput);
}

TEST_CASE("triangle cycle cannot be tightened further", "[persistence]") {
  const auto f = make_filtration({{Simplex{0}, 0.0},
                                  {Simplex{1}, 0.0},
                                  {Simplex{2}, 0.0},
                                  {Simplex{0, 1}, 1.0},
                                  {Simplex{1, 2}, 1.0},
                                  {Simplex{0, 2}, 1.0},
                                  {Simplex{0, 1, 2}, 2.0}});
  const auto r = compute_persistence(f);
  const auto cyc = representative_cycle(r.pairing, r.diagram(1).points.at(0));
  const auto tight = tighten_cycle_1d(r.pairing, cyc);
  CHECK(tight.cells.size() == 3);
  CHECK(tight.cells == cyc.cells);
  CHECK(tight.same_class);
}

TEST_CASE("hexagon with a later chord tightens through the birth edge", "[persistence]") {
  // Hexagon 0..5 at value 1, chord {0,3} at 2, then the two quadrilaterals
  // 0-1-2-3 and 0-3-4-5 are filled at 3 and 4. The reduced column of the
  // second filling is the whole hexagon.
  std::vector<std::pair<Simplex, double>> cells;
  for (Vertex v = 0; v < 6; ++v) cells.push_back({Simplex{v}, 0.0});
  for (Vertex v = 0; v < 6; ++v) cells.push_back({Simplex{v, static_cast<Vertex>((v + 1) % 6)}, 1.0});
  cells.push_back({Simplex{0, 3}, 2.0});
  cells.push_back({Simplex{0, 2}, 3.0});
  cells.push_back({Simplex{0, 1, 2}, 3.0});
  cells.push_back({Simplex{0, 2, 3}, 3.0});
  cells.push_back({Simplex{0, 4}, 4.0});
  cells.push_back({Simplex{0, 3, 4}, 4.0});
  cells.push_back({Simplex{0, 4, 5}, 4.0});
  const auto f = make_filtration(cells);
  const auto r = compute_persistence(f);
  const auto pd1 = r.diagram(1);
  CHECK(oracle::multiset(pd1) == std::vector<oracle::Pair>{{1, 4}, {2, 3}});
  for (const auto& p : pd1.points) {
    const auto cyc = representative_cycle(r.pairing, p);
    const auto tight = tighten_cycle_1d(r.pairing, cyc);
    CHECK(chain_boundary(f, tight.cells).empty());
    CHECK(std::find(tight.cells.begin(), tight.cells.end(), p.birth_cell) != tight.cells.end());
    CHECK(tight.cells.size() <= cyc.cells.size());
    CHECK(tight.same_class);
    if (p.birth == 1.0) CHECK(tight.cells.size() == 6);
    else CHECK(tight.cells.size() == 4);
  }
}

TEST_CASE("tightened cycles on random Rips filtrations", "[persistence]") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 25;
    const auto xs = oracle::uniform_points(rng, n, 2);
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::hypot(xs[2 * i] - xs[2 * j], xs[2 * i + 1] - xs[2 * j + 1]);
    const auto f = rips_filtration(DistanceMatrix(n, d), 2, 0.5);
    const auto r = compute_persistence(f);
    for (const auto& p : r.diagram(1).finite()) {
      const auto cyc = representative_cycle(r.pairing, p);
      CHECK(chain_boundary(f, cyc.cells).empty());
      const auto tight = tighten_cycle_1d(r.pairing, cyc);
      CHECK(chain_boundary(f, tight.cells).empty());
      CHECK(std::find(tight.cells.begin(), tight.cells.end(), p.birth_cell) != tight.cells.end());
      for (Index c : tight.cells) CHECK(c <= p.birth_cell);
    }
  }
}
