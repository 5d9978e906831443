#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qconvex/grid.hpp"

namespace qconvex::fixtures {

inline double radius_at(std::size_t i, std::size_t j, double c) {
  return std::hypot(static_cast<double>(i) - c, static_cast<double>(j) - c);
}

inline ScalarField affine(std::size_t n, double a, double b) {
  const double span = (std::abs(a) + std::abs(b)) * static_cast<double>(n);
  return ScalarField::generate(n, n, [&](auto i, auto j) {
    return 0.5 + (a * (double(i) - n / 2.0) + b * (double(j) - n / 2.0)) / span;
  });
}

// 1 at the apex, falling linearly with distance. Unclipped inside the grid.
inline ScalarField cone(std::size_t n, double c, double reach) {
  return ScalarField::generate(n, n, [&](auto i, auto j) { return 1.0 - radius_at(i, j, c) / reach; });
}

inline ScalarField paraboloid(std::size_t n, double c, double reach) {
  return ScalarField::generate(n, n, [&](auto i, auto j) {
    const double r = radius_at(i, j, c) / reach;
    return 1.0 - r * r;
  });
}

inline ScalarField gaussian(std::size_t n, double ci, double cj, double sigma) {
  return ScalarField::generate(n, n, [&](auto i, auto j) {
    const double di = double(i) - ci, dj = double(j) - cj;
    return std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
  });
}

inline ScalarField saddle(std::size_t n, double c) {
  const double s = 1.0 / (c * c);
  return ScalarField::generate(n, n, [&](auto i, auto j) {
    const double di = double(i) - c, dj = double(j) - c;
    return 0.5 + 0.5 * s * (di * di - dj * dj);
  });
}

inline ScalarField two_bumps(std::size_t n, double sigma) {
  const double c = n / 2.0, off = n / 5.0;
  const auto a = gaussian(n, c, c - off, sigma), b = gaussian(n, c, c + off, sigma);
  ScalarField out(n, n);
  for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = 0.5 * (a.values()[k] + b.values()[k]);
  return out;
}

inline ScalarField ring(std::size_t n, double radius, double sigma) {
  const double c = (n - 1) / 2.0;
  return ScalarField::generate(n, n, [&](auto i, auto j) {
    const double d = radius_at(i, j, c) - radius;
    return std::exp(-d * d / (2.0 * sigma * sigma));
  });
}

// L-shaped binary mask, smoothed by one 3x3 box blur.
inline ScalarField blurred_l(std::size_t n) {
  const auto inside = [n](long i, long j) {
    const long lo = long(n) / 5, hi = long(n) - long(n) / 5, mid = long(n) / 2;
    const bool vertical = i >= lo && i < hi && j >= lo && j < mid;
    const bool horizontal = i >= mid && i < hi && j >= lo && j < hi;
    return vertical || horizontal;
  };
  return ScalarField::generate(n, n, [&](auto i, auto j) {
    double s = 0.0;
    for (long a = -1; a <= 1; ++a)
      for (long b = -1; b <= 1; ++b) s += inside(long(i) + a, long(j) + b) ? 1.0 : 0.0;
    return s / 9.0;
  });
}

struct Named {
  std::string name;
  ScalarField field;
};

inline std::vector<Named> quasiconcave_family(std::size_t n = 33) {
  const double c = (n - 1) / 2.0;
  return {{"ramp_x", affine(n, 1.0, 0.0)},
          {"ramp_diag", affine(n, 2.0, -3.0)},
          {"cone", cone(n, c, 2.0 * n)},
          {"cone_offset", cone(n, c + 3.5, 2.0 * n)},
          {"paraboloid", paraboloid(n, c, 1.5 * n)},
          {"gaussian", gaussian(n, c, c, n / 4.0)},
          {"gaussian_offset", gaussian(n, c - 2.3, c + 1.7, n / 3.0)}};
}

inline std::vector<Named> nonconvex_family(std::size_t n = 33) {
  const double c = (n - 1) / 2.0;
  return {{"saddle", saddle(n, c)},
          {"two_bumps", two_bumps(n, n / 10.0)},
          {"ring", ring(n, n / 4.0, 2.5)},
          {"blurred_l", blurred_l(n)}};
}

}  // namespace qconvex::fixtures
