#pragma once

#include <array>
#include <string_view>

#include "qconvex/grid.hpp"

namespace qconvex {

enum class StencilKind { Dx, Dy, Dxx, Dyy, Dxy };

inline constexpr std::array<StencilKind, 5> kAllStencils = {
    StencilKind::Dx, StencilKind::Dy, StencilKind::Dxx, StencilKind::Dyy, StencilKind::Dxy};

/// Fixed 3x3 finite-difference kernel. Applied as a sliding correlation
/// (no kernel flip): (s*u)(i,j) = sum_{a,b} w[a+1][b+1] u(i+a, j+b), with
/// out-of-bounds reads taken as zero.
///
///   Dx  = [0 0 0; 0 -1 0; 0 1 0]      forward difference along rows
///   Dy  = [0 0 0; 0 -1 1; 0 0 0]      forward difference along columns
///   Dxx = [0 1 0; 0 -2 0; 0 1 0]
///   Dyy = [0 0 0; 1 -2 1; 0 0 0]
///   Dxy = [0 0 0; 0 1 -1; 0 -1 1]     equals Dx∘Dy on the interior
struct Stencil {
  StencilKind kind;
  std::array<std::array<double, 3>, 3> weights;

  std::string_view name() const;
};

const Stencil& stencil(StencilKind kind);

ScalarField apply(const Stencil& s, const ScalarField& u);
/// Exact transpose of apply() under zero padding.
ScalarField apply_adjoint(const Stencil& s, const ScalarField& v);

inline ScalarField apply(StencilKind k, const ScalarField& u) { return apply(stencil(k), u); }
inline ScalarField apply_adjoint(StencilKind k, const ScalarField& v) {
  return apply_adjoint(stencil(k), v);
}

struct Gradient {
  ScalarField ux;
  ScalarField uy;
};

Gradient gradient(const ScalarField& u);

/// sqrt(ux^2 + uy^2 + eps_g); eps_g must be positive.
ScalarField smoothed_grad_magnitude(const ScalarField& u, double eps_g);

/// All five stencil responses of one field.
struct Derivatives {
  ScalarField ux, uy, uxx, uyy, uxy;
};

Derivatives derivatives(const ScalarField& u);

inline constexpr double kDefaultEpsGrad = 1e-8;

}  // namespace qconvex
