#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "qconvex/grid.hpp"
#include "qconvex/oracle.hpp"

using namespace qconvex;

namespace {

std::set<Offset> enumerate_offsets(double r) {
  std::set<Offset> out;
  for (int a = -10; a <= 10; ++a)
    for (int b = -10; b <= 10; ++b) {
      const double n = std::sqrt(static_cast<double>(a * a + b * b));
      if (n > 0 && n <= r) out.insert({a, b});
    }
  return out;
}

}  // namespace

TEST_CASE("make_offsets matches enumeration") {
  const auto r1 = make_offsets(1.0);
  REQUIRE(r1.size() == 4);
  CHECK(r1.offsets == std::vector<Offset>{{-1, 0}, {0, -1}, {0, 1}, {1, 0}});
  CHECK(make_offsets(1.5).size() == 8);
  CHECK(make_offsets(2.0).size() == 12);
  for (double r : {1.0, 1.5, 2.0, 2.5, 3.0, 5.0}) {
    const auto o = make_offsets(r);
    const std::set<Offset> got(o.begin(), o.end());
    CHECK(got.size() == o.size());
    CHECK(got == enumerate_offsets(r));
    CHECK(std::is_sorted(o.begin(), o.end()));
    for (const auto& d : o) CHECK(got.count({-d.dx, -d.dy}) == 1);
  }
  CHECK_THROWS_AS(make_offsets(0.5), std::invalid_argument);
}

TEST_CASE("make_ball includes the origin") {
  const auto ball = make_ball(2.0);
  CHECK(ball.size() == 13);
  CHECK(std::count(ball.begin(), ball.end(), Offset{0, 0}) == 1);
}

TEST_CASE("ScalarField construction") {
  CHECK_THROWS_AS(ScalarField(2, 3, std::vector<double>(5)), std::invalid_argument);
  ScalarField f(2, 3, 1.5);
  CHECK(f.size() == 6);
  CHECK(f.sum() == doctest::Approx(9.0));
  CHECK(f.value_or_zero(-1, 0) == 0.0);
  CHECK(f.value_or_zero(1, 2) == 1.5);
  CHECK_FALSE(f.is_mask());
  f(0, 0) = NAN;
  CHECK_FALSE(f.all_finite());
}

TEST_CASE("linf_distance") {
  ScalarField a(3, 3), b(3, 3);
  CHECK(linf_distance(a, a) == 0.0);
  b(1, 2) = 0.3;
  CHECK(linf_distance(a, b) == 0.3);
  CHECK_THROWS_AS(linf_distance(a, ScalarField(3, 4)), std::invalid_argument);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto x = random_field(s, 4, 4), y = random_field(s + 100, 4, 4),
               z = random_field(s + 200, 4, 4);
    double naive = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) naive = std::max(naive, std::abs(x(i, j) - y(i, j)));
    CHECK(linf_distance(x, y) == naive);
    CHECK(linf_distance(x, y) == linf_distance(y, x));
    CHECK(linf_distance(x, z) <= linf_distance(x, y) + linf_distance(y, z));
  }
}

TEST_CASE("threshold") {
  const ScalarField half(4, 4, 0.5);
  CHECK(threshold(half, 0.5).count() == 16);
  CHECK(threshold(half, 0.6).count() == 0);

  const auto ramp = ScalarField::generate(6, 6, [](auto i, auto) { return i / 5.0; });
  const auto m = threshold(ramp, 0.5);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(m(i, j) == (i >= 3));

  const auto u = random_field(3, 10, 10, 0.0, 1.0);
  for (double g1 : {0.1, 0.3, 0.5})
    for (double g2 : {0.5, 0.7, 0.9}) {
      const auto lo = threshold(u, g1), hi = threshold(u, g2);
      for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j)
          if (hi(i, j)) CHECK(lo(i, j));
    }
}
