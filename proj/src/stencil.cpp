#include "qconvex/stencil.hpp"

#include <cmath>
#include <stdexcept>

namespace qconvex {
namespace {

const Stencil kDx{StencilKind::Dx, {{{0, 0, 0}, {0, -1, 0}, {0, 1, 0}}}};
const Stencil kDy{StencilKind::Dy, {{{0, 0, 0}, {0, -1, 1}, {0, 0, 0}}}};
const Stencil kDxx{StencilKind::Dxx, {{{0, 1, 0}, {0, -2, 0}, {0, 1, 0}}}};
const Stencil kDyy{StencilKind::Dyy, {{{0, 0, 0}, {1, -2, 1}, {0, 0, 0}}}};
const Stencil kDxy{StencilKind::Dxy, {{{0, 0, 0}, {0, 1, -1}, {0, -1, 1}}}};

// sign = +1 reads u(i+a, j+b) (correlation), sign = -1 scatters to
// v(i-a, j-b) (its transpose).
ScalarField correlate(const Stencil& s, const ScalarField& u, int sign) {
  const long h = static_cast<long>(u.height());
  const long w = static_cast<long>(u.width());
  ScalarField out(u.height(), u.width());
  for (long i = 0; i < h; ++i) {
    for (long j = 0; j < w; ++j) {
      double acc = 0.0;
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
          const double wgt = s.weights[a + 1][b + 1];
          if (wgt != 0.0) acc += wgt * u.value_or_zero(i + sign * a, j + sign * b);
        }
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
    }
  }
  return out;
}

}  // namespace

std::string_view Stencil::name() const {
  switch (kind) {
    case StencilKind::Dx: return "Dx";
    case StencilKind::Dy: return "Dy";
    case StencilKind::Dxx: return "Dxx";
    case StencilKind::Dyy: return "Dyy";
    case StencilKind::Dxy: return "Dxy";
  }
  return "?";
}

const Stencil& stencil(StencilKind kind) {
  switch (kind) {
    case StencilKind::Dx: return kDx;
    case StencilKind::Dy: return kDy;
    case StencilKind::Dxx: return kDxx;
    case StencilKind::Dyy: return kDyy;
    case StencilKind::Dxy: return kDxy;
  }
  throw std::invalid_argument("unknown stencil");
}

ScalarField apply(const Stencil& s, const ScalarField& u) { return correlate(s, u, +1); }

ScalarField apply_adjoint(const Stencil& s, const ScalarField& v) { return correlate(s, v, -1); }

Gradient gradient(const ScalarField& u) {
  return {apply(kDx, u), apply(kDy, u)};
}

ScalarField smoothed_grad_magnitude(const ScalarField& u, double eps_g) {
  if (!(eps_g > 0.0)) throw std::invalid_argument("smoothed_grad_magnitude: eps_g must be > 0");
  auto [ux, uy] = gradient(u);
  ScalarField g(u.height(), u.width());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a = ux.values()[k];
    const double b = uy.values()[k];
    g.values()[k] = std::sqrt(a * a + b * b + eps_g);
  }
  return g;
}

Derivatives derivatives(const ScalarField& u) {
  return {apply(kDx, u), apply(kDy, u), apply(kDxx, u), apply(kDyy, u), apply(kDxy, u)};
}

}  // namespace qconvex
