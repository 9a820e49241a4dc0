#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "phkit/diagram_distance.hpp"
#include "phkit/histogram.hpp"
#include "phkit/persistence_image.hpp"
#include "support/oracles.hpp"

using namespace phkit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

PersistenceDiagram diagram(std::vector<std::pair<double, double>> pts, int degree = 1) {
  PersistenceDiagram d;
  d.degree = degree;
  for (auto [b, de] : pts) d.points.push_back({b, de});
  return d;
}

PersistenceDiagram tetra_pd1() {
  const double b = 0.5, d = 1 / std::sqrt(3.0);
  return diagram({{b, d}, {b, d}, {b, d}});
}

PersistenceDiagram random_diagram(std::mt19937_64& rng, std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> count(0, max_points);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> pts;
  const auto n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double b = u(rng), l = u(rng) * 0.6;
    pts.emplace_back(b, b + l);
  }
  return diagram(pts);
}

}  // namespace

TEST_CASE("histogram bins the tetrahedron loops together", "[analysis]") {
  const auto h = histogram(tetra_pd1(), 0, 1, 2);
  CHECK(h.count(1, 1) == 3);
  CHECK(h.total() == 3);
  CHECK(h.overflow == 0);
}

TEST_CASE("histogram edge rules", "[analysis]") {
  const auto empty = histogram(diagram({}), 0, 1, 4);
  CHECK(empty.total() == 0);
  CHECK(empty.counts.size() == 16);
  const auto top = histogram(diagram({{0.25, 1.0}}), 0, 1, 4);
  CHECK(top.count(1, 3) == 1);
  const auto out = histogram(diagram({{0.25, 1.5}, {-0.1, 0.5}, {0.1, kInf}}), 0, 1, 4);
  CHECK(out.total() == 0);
  CHECK(out.overflow == 2);
  CHECK(out.essential == 1);
  CHECK_THROWS_AS(histogram(diagram({}), 1, 1, 4), BadRange);
  CHECK_THROWS_AS(histogram(diagram({}), 2, 1, 4), BadRange);
  CHECK_THROWS_AS(histogram(diagram({}), 0, 1, 0), BadRange);
}

TEST_CASE("histogram with many bins keeps interior edges half-open", "[analysis]") {
  const auto h = histogram(diagram({{0.5, 0.75}}), 0, 1, 256);
  CHECK(h.count(128, 192) == 1);
  CHECK(h.bin_of(0.0) == std::size_t{0});
  CHECK(h.bin_of(1.0) == std::size_t{255});
  CHECK_FALSE(h.bin_of(1.0000001).has_value());
}

TEST_CASE("persistence image of an empty diagram is zero", "[analysis]") {
  ImageParams p;
  p.bins = 8;
  const auto img = persistence_image(diagram({}), p);
  CHECK(img.values.size() == 64);
  CHECK(std::all_of(img.values.begin(), img.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("persistence image mass and peak", "[analysis]") {
  ImageParams p;
  p.lo = 0;
  p.hi = 2;
  p.bins = 64;
  p.sigma = 0.05;
  p.w_max = 1.0;
  const auto img = persistence_image(diagram({{0.8, 1.3}}), p);
  const double total = std::accumulate(img.values.begin(), img.values.end(), 0.0);
  CHECK_THAT(total, WithinRel(0.5, 1e-6));
  const auto peak = static_cast<std::size_t>(std::max_element(img.values.begin(), img.values.end()) - img.values.begin());
  const double width = 2.0 / 64;
  CHECK(peak % 64 == static_cast<std::size_t>(0.8 / width));
  CHECK(peak / 64 == static_cast<std::size_t>(1.3 / width));
  for (double v : img.values) CHECK(v >= 0);
}

TEST_CASE("persistence image is translation equivariant", "[analysis]") {
  std::mt19937_64 rng(61);
  const auto d = random_diagram(rng, 6);
  const double delta = 0.375;
  std::vector<std::pair<double, double>> shifted;
  for (const auto& q : d.points) shifted.emplace_back(q.birth + delta, q.death + delta);
  ImageParams p;
  p.lo = -0.5;
  p.hi = 2.0;
  p.bins = 20;
  p.sigma = 0.1;
  p.w_max = 0.5;
  ImageParams ps = p;
  ps.lo += delta;
  ps.hi += delta;
  const auto a = persistence_image(d, p), b = persistence_image(diagram(shifted), ps);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK_THAT(b.values[i], WithinAbs(a.values[i], 1e-12));
}

TEST_CASE("persistence image parameters", "[analysis]") {
  ImageParams p;
  p.lo = 0;
  p.hi = 1;
  p.bins = 10;
  const auto r = resolve_image_params(p);
  CHECK(*r.sigma == 0.1);
  CHECK(*r.w_max == 1.0);
  ImageParams bad = p;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(persistence_image(diagram({}), bad), BadParams);
  bad = p;
  bad.w_max = -1.0;
  CHECK_THROWS_AS(persistence_image(diagram({}), bad), BadParams);
  bad = p;
  bad.hi = 0;
  CHECK_THROWS_AS(persistence_image(diagram({}), bad), BadParams);
  bad = p;
  bad.bins = 0;
  CHECK_THROWS_AS(persistence_image(diagram({}), bad), BadParams);
  CHECK(image_weight({0, 2}, 1.0) == 1.0);
  CHECK(image_weight({0, 0.25}, 1.0) == 0.25);
}

TEST_CASE("tetrahedron loops peak in their bin", "[analysis]") {
  ImageParams p;
  p.lo = 0.405;
  p.hi = 0.705;
  p.bins = 30;
  p.sigma = 0.01;
  const auto img = persistence_image(tetra_pd1(), p);
  const auto peak = static_cast<std::size_t>(std::max_element(img.values.begin(), img.values.end()) - img.values.begin());
  const double width = 0.3 / 30;
  CHECK(peak % 30 == 9);
  CHECK(peak / 30 == static_cast<std::size_t>((1 / std::sqrt(3.0) - 0.405) / width));
}

TEST_CASE("bottleneck distance basics", "[analysis]") {
  CHECK(bottleneck_distance(tetra_pd1(), tetra_pd1()).value == 0.0);
  CHECK(bottleneck_distance(diagram({{0, 1}}), diagram({})).value == 0.5);
  CHECK(bottleneck_distance(diagram({}), diagram({})).value == 0.0);
  const double s3 = 1 / std::sqrt(3.0);
  const auto tet = diagram({{s3, std::sqrt(3.0 / 8)}}, 2), oct = diagram({{s3, 1 / std::sqrt(2.0)}}, 2);
  // Matching the two points costs 0.0947; sending both to the diagonal costs
  // max(0.0175, 0.0649).
  CHECK_THAT(bottleneck_distance(tet, oct).value, WithinAbs((1 / std::sqrt(2.0) - s3) / 2, 1e-15));
  CHECK(bottleneck_distance(tet, oct).value < 1 / std::sqrt(2.0) - std::sqrt(3.0 / 8));
}

TEST_CASE("essential points", "[analysis]") {
  const auto a = diagram({{0, kInf}, {0, 1}}, 0), b = diagram({{0.25, kInf}, {0, 1}}, 0);
  CHECK(bottleneck_distance(a, b).value == 0.25);
  CHECK(wasserstein_distance(a, b).value == 0.25);
  const auto c = diagram({{0, kInf}, {1, kInf}}, 0);
  CHECK(std::isinf(bottleneck_distance(a, c).value));
  CHECK(std::isinf(wasserstein_distance(a, c, 2).value));
}

TEST_CASE("Wasserstein distance basics", "[analysis]") {
  CHECK(wasserstein_distance(tetra_pd1(), tetra_pd1()).value == 0.0);
  CHECK(wasserstein_distance(diagram({{0, 1}}), diagram({})).value == 0.5);
  CHECK(wasserstein_distance(diagram({{0, 1}, {0, 1}}), diagram({})).value == 1.0);
  CHECK_THAT(wasserstein_distance(diagram({{0, 1}, {0, 1}}), diagram({}), 2).value, WithinAbs(std::sqrt(0.5), 1e-15));
  CHECK(wasserstein_distance(diagram({{0, 1}}), diagram({}), kInf).value == 0.5);
  CHECK_THROWS_AS(wasserstein_distance(diagram({}), diagram({}), 0.5), BadParams);
}

TEST_CASE("perturbation bound", "[analysis]") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> e(-1e-3, 1e-3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_diagram(rng, 20);
    auto b = a;
    for (auto& p : b.points) {
      p.birth += e(rng);
      p.death += e(rng);
    }
    CHECK(bottleneck_distance(a, b).value <= 1e-3);
  }
}

TEST_CASE("distances match exhaustive matchings", "[analysis]") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_diagram(rng, 6), b = random_diagram(rng, 6);
    const auto ma = oracle::multiset(a), mb = oracle::multiset(b);
    CHECK_THAT(bottleneck_distance(a, b).value, WithinAbs(oracle::matching_distance(ma, mb, kInf), 1e-12));
    for (double q : {1.0, 2.0, 3.5})
      CHECK_THAT(wasserstein_distance(a, b, q).value, WithinAbs(oracle::matching_distance(ma, mb, q), 1e-9));
  }
}

TEST_CASE("reported matchings realise the distance", "[analysis]") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_diagram(rng, 8), b = random_diagram(rng, 8);
    const auto bn = bottleneck_distance(a, b);
    const auto w1 = wasserstein_distance(a, b);
    double worst = 0, sum = 0;
    std::vector<int> seen_a(a.points.size()), seen_b(b.points.size());
    for (const auto& e : bn.matching) worst = std::max(worst, e.cost);
    for (const auto& e : w1.matching) {
      sum += e.cost;
      if (e.a >= 0) ++seen_a[static_cast<std::size_t>(e.a)];
      if (e.b >= 0) ++seen_b[static_cast<std::size_t>(e.b)];
    }
    CHECK_THAT(worst, WithinAbs(bn.value, 1e-12));
    CHECK_THAT(sum, WithinAbs(w1.value, 1e-9));
    for (int s : seen_a) CHECK(s == 1);
    for (int s : seen_b) CHECK(s == 1);
  }
}
