#pragma once

#include <cstddef>
#include <string_view>

#include "qconvex/grid.hpp"
#include "qconvex/stencil.hpp"

namespace qconvex {

/// Parameters shared by both convexity losses.
///
/// The sums skip anchors within `border` pixels of the frame, but the value
/// is always normalised by the full pixel count |Omega|. The first-order
/// loss therefore scales with the number of window offsets, i.e. with r^2.
struct LossConfig {
  double radius = 2.0;         // window radius r (pixels)
  double eps_sigmoid = 0.05;   // temperature of the soft indicator
  double delta = 1e-3;         // second-order margin
  double eps_g = kDefaultEpsGrad;
  std::size_t border = 2;

  void validate() const;
};

struct LossResult {
  double value = 0.0;
  ScalarField per_pixel;  // integrand before the 1/|Omega| factor
};

enum class LossKind { FirstOrder, SecondOrder };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view text);  // "1st" | "2nd"

/// Soft indicator 1 / (1 + exp(-t/eps)).
double soft_sigmoid(double t, double eps);

/// (1/|Omega|) sum_y sum_{x in N_y} sigmoid_eps(u(x)-u(y)) relu(-grad u(y).(x-y)).
/// per_pixel holds the inner sum at each anchor y.
LossResult loss_first_order(const ScalarField& u, const LossConfig& cfg);

/// (1/|Omega|) sum_x |grad u(x)| relu(Q2(x) + delta).
LossResult loss_second_order(const ScalarField& u, const LossConfig& cfg);

/// The three contributions to the first-order gradient, each already
/// divided by |Omega|.
struct FirstOrderGradientTerms {
  ScalarField source;   // u(p) as u(x) inside the soft indicator
  ScalarField anchor;   // u(p) as u(y) inside the soft indicator
  ScalarField stencil;  // Dx^T Cx + Dy^T Cy through the anchor gradient
};

FirstOrderGradientTerms grad_first_order_terms(const ScalarField& u, const LossConfig& cfg);
ScalarField grad_first_order(const ScalarField& u, const LossConfig& cfg);
ScalarField grad_second_order(const ScalarField& u, const LossConfig& cfg);

LossResult loss(LossKind kind, const ScalarField& u, const LossConfig& cfg);
ScalarField loss_gradient(LossKind kind, const ScalarField& u, const LossConfig& cfg);

/// Chain rule through u = sigmoid(o): grad_o = grad_u * u(1-u).
ScalarField grad_wrt_logits(const ScalarField& grad_u, const ScalarField& u);

}  // namespace qconvex
