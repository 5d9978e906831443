#include "qconvex/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qconvex {

ConvexifyResult midpoint_convexify(const ScalarField& u, double radius, std::size_t t_max,
                                   double eps) {
  if (t_max == 0) throw std::invalid_argument("midpoint_convexify: t_max must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("midpoint_convexify: eps must be > 0");
  const OffsetSet offsets = make_offsets(radius);
  const long h = static_cast<long>(u.height());
  const long w = static_cast<long>(u.width());

  ConvexifyResult result{u, {}};
  ScalarField& cur = result.field;
  ScalarField next = cur;
  while (result.trace.iterations < t_max) {
    next = cur;
    for (long i = 0; i < h; ++i)
      for (long j = 0; j < w; ++j) {
        const double uy = cur(i, j);
        for (const Offset& d : offsets) {
          const long zi = i + 2 * d.dx, zj = j + 2 * d.dy;
          if (!cur.contains(zi, zj)) continue;
          double& target = next(static_cast<std::size_t>(i + d.dx), static_cast<std::size_t>(j + d.dy));
          target = std::max(target, std::min(uy, cur(zi, zj)));
        }
      }
    ++result.trace.iterations;
    double raised = 0.0;
    double step = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double diff = next.values()[k] - cur.values()[k];
      raised += diff;
      step = std::max(step, diff);
    }
    result.trace.objective_history.push_back(raised / static_cast<double>(cur.size()));
    result.trace.final_linf_step = step;
    if (step < eps) break;
    std::swap(cur, next);
  }
  return result;
}

void CgpmConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("CgpmConfig: eta must be > 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("CgpmConfig: lambda must be >= 0");
  if (t_max == 0) throw std::invalid_argument("CgpmConfig: t_max must be >= 1");
  if (!(logit_clamp > 0.0)) throw std::invalid_argument("CgpmConfig: logit_clamp must be > 0");
  if (!(early_stop >= 0.0)) throw std::invalid_argument("CgpmConfig: early_stop must be >= 0");
  loss.validate();
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

ScalarField sigmoid(const ScalarField& logits) {
  ScalarField out(logits.height(), logits.width());
  for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = sigmoid(logits.values()[k]);
  return out;
}

ScalarField mask_to_logits(const ScalarField& mask) {
  constexpr double kFloor = 1e-7;
  ScalarField out(mask.height(), mask.width());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double v = std::clamp(mask.values()[k], kFloor, 1.0 - kFloor);
    out.values()[k] = std::log(v / (1.0 - v));
  }
  return out;
}

double cgpm_objective(const ScalarField& logits_t, const ScalarField& logits,
                      const CgpmConfig& cfg) {
  require_same_shape(logits_t, logits, "cgpm_objective");
  double prox = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    const double diff = logits_t.values()[k] - logits.values()[k];
    prox += diff * diff;
  }
  double reg = 0.0;
  if (cfg.lambda != 0.0) reg = loss(cfg.loss_kind, sigmoid(logits_t), cfg.loss).value;
  return 0.5 * prox + cfg.lambda * reg;
}

ConvexifyResult cgpm(const ScalarField& logits, const CgpmConfig& cfg) {
  cfg.validate();
  if (!logits.all_finite()) throw std::invalid_argument("cgpm: logits must be finite");

  // The proximal anchor is the clamped input, so a saturated mask does not
  // pay for the clamp on the first step.
  ScalarField anchor = logits;
  for (double& o : anchor.values()) o = std::clamp(o, -cfg.logit_clamp, cfg.logit_clamp);
  ScalarField cur = anchor;
  ScalarField v = sigmoid(cur);
  ConvexifyTrace trace;
  while (trace.iterations < cfg.t_max) {
    ScalarField conv(cur.height(), cur.width());
    if (cfg.lambda != 0.0) {
      conv = loss_gradient(cfg.loss_kind, v, cfg.loss);
      if (cfg.chain_rule) conv = grad_wrt_logits(conv, v);
    }
    double step = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double o_t = cur.values()[k];
      const double update = cfg.eta * ((o_t - anchor.values()[k]) + cfg.lambda * conv.values()[k]);
      const double o_next = std::clamp(o_t - update, -cfg.logit_clamp, cfg.logit_clamp);
      step = std::max(step, std::abs(o_next - o_t));
      cur.values()[k] = o_next;
    }
    v = sigmoid(cur);
    ++trace.iterations;
    trace.final_linf_step = step;
    trace.objective_history.push_back(cgpm_objective(cur, anchor, cfg));
    if (step < cfg.early_stop) break;
  }
  return {std::move(v), std::move(trace)};
}

}  // namespace qconvex
