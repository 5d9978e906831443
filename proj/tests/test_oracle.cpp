#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fixtures.hpp"
#include "qconvex/oracle.hpp"

using namespace qconvex;

namespace {

std::vector<Point> set_points(const BinaryMask& m) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < m.height(); ++i)
    for (std::size_t j = 0; j < m.width(); ++j)
      if (m(i, j)) pts.push_back({long(i), long(j)});
  return pts;
}

long cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

const std::vector<double> kLevels{0.25, 0.5, 0.75};

}  // namespace

TEST_CASE("shape names") {
  for (auto k : kAllShapes) CHECK(parse_shape_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_shape_kind("hexagon"), std::invalid_argument);
  CHECK(is_convex_kind(ShapeKind::Disk));
  CHECK_FALSE(is_convex_kind(ShapeKind::Star));
}

TEST_CASE("make_shape") {
  ShapeSpec disk{40.0, 40.0, DiskParams{20.0}, 50.0};
  const auto u = make_shape(disk, 81, 81);
  CHECK(u.is_mask());
  disk.sharpness = 1.0;
  for (double v : make_shape(disk, 81, 81).values()) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  disk.sharpness = 50.0;
  const auto m = threshold(u, 0.5);
  const double area = std::numbers::pi * 400.0;
  CHECK(std::abs(double(m.count()) - area) <= 2.0 * std::numbers::pi * 20.0);
  CHECK(m(40, 40));
  CHECK(m(40, 60));
  CHECK_FALSE(m(40, 61));

  const auto two = make_shape(default_shape(ShapeKind::TwoDisks, 96, 96, 1.0), 96, 96);
  CHECK(count_components(threshold(two, 0.5)) == 2);
  const auto star = make_shape(default_shape(ShapeKind::Star, 128, 128, 1.0), 128, 128);
  CHECK(hull_deficit(star, 0.5).deficit > 0.2);

  ShapeSpec too_big{10.0, 10.0, DiskParams{9.0}, 1.0};
  CHECK_THROWS_AS(make_shape(too_big, 21, 21), std::invalid_argument);
}

TEST_CASE("brute force on shapes") {
  for (auto kind : kAllShapes) {
    if (kind == ShapeKind::TwoDisks) continue;
    const auto u = make_shape(default_shape(kind, 64, 64, 1.0), 64, 64);
    const std::vector<double> half{0.5};
    const auto rep = brute_force_quasiconcave(u, half, 0.0);
    INFO(to_string(kind));
    CHECK(rep.holds() == is_convex_kind(kind));
  }
}

TEST_CASE("brute force examples") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto poly = rasterize_convex_polygon(random_convex_polygon(s, 40, 40), 40, 40).to_field();
    CHECK(brute_force_quasiconcave(poly, kLevels, 0.0).holds());
  }
  BinaryMask l(30, 30);
  for (std::size_t i = 5; i < 25; ++i)
    for (std::size_t j = 5; j < 25; ++j)
      if (j < 12 || i >= 18) l.set(i, j, true);
  const std::vector<double> half{0.5};
  const auto rep = brute_force_quasiconcave(l.to_field(), half, 0.0);
  CHECK(rep.count > 0);
  CHECK(rep.magnitude(17, 12) > 0.0);  // just off the reentrant corner

  const auto cone = fixtures::cone(31, 15.0, 40.0);
  std::vector<double> many;
  for (int k = 0; k < 10; ++k) many.push_back(0.5 + 0.05 * k);
  CHECK(brute_force_quasiconcave(cone, many, 0.0).holds());
  const auto per = brute_force_per_level(fixtures::ring(31, 8.0, 2.0), kLevels, 0.0);
  REQUIRE(per.size() == 3);
  for (const auto& r : per) CHECK(r.count > 0);
}

TEST_CASE("brute force subsampling is deterministic") {
  const auto u = make_shape(default_shape(ShapeKind::Star, 64, 64, 1.0), 64, 64);
  const auto a = brute_force_quasiconcave(u, kLevels, 0.0, 5000);
  const auto b = brute_force_quasiconcave(u, kLevels, 0.0, 5000);
  CHECK(a.magnitude == b.magnitude);
  CHECK(a.count > 0);
}

TEST_CASE("convex hull") {
  const std::vector<Point> square{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}};
  auto hull = convex_hull(square);
  CHECK(hull.size() == 4);
  for (const auto& p : hull) CHECK(p != Point{2, 2});
  CHECK(convex_hull({{0, 0}, {1, 1}, {2, 2}}) == std::vector<Point>{{0, 0}, {2, 2}});
  CHECK(convex_hull({{3, 3}, {3, 3}}).size() == 1);
  CHECK_THROWS_AS(convex_hull({}), std::invalid_argument);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(-50, 50);
  std::vector<Point> pts(100);
  for (auto& p : pts) p = {d(rng), d(rng)};
  hull = convex_hull(pts);
  for (std::size_t k = 0; k < hull.size(); ++k) {
    CHECK(std::find(pts.begin(), pts.end(), hull[k]) != pts.end());
    CHECK(cross(hull[k], hull[(k + 1) % hull.size()], hull[(k + 2) % hull.size()]) > 0);
  }
  for (const auto& p : pts) CHECK(in_convex_polygon(hull, double(p.x), double(p.y)));
  for (int rep = 0; rep < 5; ++rep) {
    std::shuffle(pts.begin(), pts.end(), rng);
    CHECK(convex_hull(pts) == hull);
  }
}

TEST_CASE("hull deficit") {
  const auto disk = make_shape(default_shape(ShapeKind::Disk, 96, 96, 4.0), 96, 96);
  const auto hd = hull_deficit(disk, 0.5);
  CHECK(hd.deficit <= 0.02);
  CHECK(hd.deficit >= 0.0);
  CHECK(hd.set_area <= hd.hull_area);
  CHECK(hd.perimeter > 0.0);

  const auto star = make_shape(default_shape(ShapeKind::Star, 96, 96, 4.0), 96, 96);
  const auto hs = hull_deficit(star, 0.5);
  CHECK(hs.deficit > 0.2);
  CHECK(hs.deficit == doctest::Approx(double(hs.hull_area - hs.set_area) / double(hs.hull_area)));
  const auto filled = rasterize_convex_polygon(convex_hull(set_points(threshold(star, 0.5))), 96, 96);
  CHECK(hull_deficit(filled).deficit <= 0.01);
  CHECK_THROWS_AS(hull_deficit(ScalarField(8, 8, 0.1), 0.5), EmptySetError);
}

TEST_CASE("fd gradient") {
  const ScalarField c(8, 8, 0.3);
  const auto g = fd_gradient(LossKind::SecondOrder, c, {}, 1e-6);
  CHECK(std::max(g.max(), -g.min()) < 1e-15);
  // A constant field sits on every first-order ReLU kink, so the differences
  // there are one-sided; the kink rule excludes every gated pixel.
  const auto kd = kink_distance(LossKind::FirstOrder, c, {});
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      if (std::isfinite(kd(i, j))) CHECK(kd(i, j) == 0.0);
  CHECK(gradient_check(LossKind::FirstOrder, c, {}).max_rel_error == 0.0);
  // With delta = 0 the second-order loss is 4-homogeneous in u, so its
  // differences scale by 2^3 when u doubles (step doubled with it).
  LossConfig cfg;
  cfg.delta = 0.0;
  cfg.eps_g = 1e-300;
  const auto u = random_field(3, 8, 8);
  ScalarField u2 = u;
  for (double& v : u2.values()) v *= 2.0;
  const auto g1 = fd_gradient(LossKind::SecondOrder, u, cfg, 1e-6);
  const auto g2 = fd_gradient(LossKind::SecondOrder, u2, cfg, 2e-6);
  double scale = 0.0;
  for (double v : g1.values()) scale = std::max(scale, std::abs(v));
  REQUIRE(scale > 0.0);
  for (std::size_t k = 0; k < u.size(); ++k)
    CHECK(std::abs(g2.values()[k] - 8.0 * g1.values()[k]) <= 1e-6 * 8.0 * scale);
}

TEST_CASE("kink exclusion") {
  const auto u = random_field(1, 8, 8);
  for (auto k : {LossKind::FirstOrder, LossKind::SecondOrder}) {
    const auto dist = kink_distance(k, u, {});
    for (double v : dist.values()) CHECK(v >= 0.0);
    const auto strict = gradient_check(k, u, {}, 1e-6, 1e9);
    std::size_t ungated = 0;
    for (double v : dist.values()) ungated += std::isinf(v);
    CHECK(strict.checked == ungated);
    CHECK(strict.excluded + ungated == u.size());
  }
}

TEST_CASE("corpus") {
  const auto corpus = make_corpus();
  CHECK(corpus.size() == 20);
  std::size_t convex = 0;
  for (const auto& c : corpus) {
    convex += c.convex;
    CHECK(c.mask.count() > 0);
  }
  CHECK(convex == 10);
  const auto again = make_corpus();
  for (std::size_t k = 0; k < corpus.size(); ++k) CHECK(corpus[k].mask == again[k].mask);
}

TEST_CASE("components and dice") {
  BinaryMask m(10, 10);
  m.set(1, 1, true);
  m.set(2, 2, true);  // diagonal neighbour: same component
  m.set(7, 7, true);
  CHECK(count_components(m) == 2);
  CHECK(dice(m, m) == 1.0);
  CHECK(dice(m, BinaryMask(10, 10)) == 0.0);
}
