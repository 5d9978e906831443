#pragma once

#include <cstddef>
#include <vector>

#include "qconvex/grid.hpp"
#include "qconvex/losses.hpp"

namespace qconvex {

struct ConvexifyTrace {
  std::size_t iterations = 0;
  // Midpoint sweeps: mean zero-order violation of the iterate entering the sweep.
  // CGPM: proximal objective 0.5|o^t - o|^2 + lambda L(v^t) after each step.
  std::vector<double> objective_history;
  double final_linf_step = 0.0;
};

struct ConvexifyResult {
  ScalarField field;
  ConvexifyTrace trace;
};

/// Local midpoint convexification. Each sweep reads only the previous
/// iterate: for every pixel y and offset d with m = y+d, z = y+2d in bounds,
/// the proposal min(u(y), u(z)) is max-combined into u_new(m). Stops when the
/// sup-norm change of a sweep drops below eps, or after t_max sweeps.
ConvexifyResult midpoint_convexify(const ScalarField& u, double radius, std::size_t t_max,
                                   double eps = 1e-12);

struct CgpmConfig {
  double eta = 1e-2;
  double lambda = 1.0;
  std::size_t t_max = 100;
  LossKind loss_kind = LossKind::SecondOrder;
  LossConfig loss;
  double logit_clamp = 16.0;
  // Apply the sigmoid chain rule u(1-u) to the convexity gradient. Disabling
  // it reproduces the uncorrected update that feeds grad_v L straight into
  // the logits.
  bool chain_rule = true;
  double early_stop = 1e-7;  // sup-norm logit step; 0 disables

  void validate() const;
};

/// Unrolled proximal gradient descent in logit space:
///   o^t <- o^t - eta((o^t - o) + lambda grad_o L(sigmoid(o^t)))
/// where o is the input clamped to +-logit_clamp. Returns sigmoid of the final
/// logits.
ConvexifyResult cgpm(const ScalarField& logits, const CgpmConfig& cfg);

/// Proximal objective 0.5|o^t - o|^2 + lambda L(sigmoid(o^t)).
double cgpm_objective(const ScalarField& logits_t, const ScalarField& logits,
                      const CgpmConfig& cfg);

double sigmoid(double x);
ScalarField sigmoid(const ScalarField& logits);
/// log(u/(1-u)) with u clamped to [1e-7, 1-1e-7].
ScalarField mask_to_logits(const ScalarField& mask);

}  // namespace qconvex
