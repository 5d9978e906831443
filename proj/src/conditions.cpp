#include "qconvex/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qconvex {

ViolationReport ViolationReport::from_magnitude(ScalarField magnitude, double tolerance) {
  ViolationReport r;
  r.tolerance = tolerance;
  for (double v : magnitude.values()) {
    if (v > tolerance) ++r.count;
    r.max_violation = std::max(r.max_violation, v);
  }
  r.magnitude = std::move(magnitude);
  return r;
}

void ConditionConfig::validate() const {
  if (!(radius >= 1.0)) throw std::invalid_argument("ConditionConfig: radius must be >= 1");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("ConditionConfig: tolerance must be >= 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("ConditionConfig: delta must be >= 0");
  if (!(eps_g > 0.0)) throw std::invalid_argument("ConditionConfig: eps_g must be > 0");
}

ScalarField q2_field(const Derivatives& d) {
  ScalarField q(d.ux.height(), d.ux.width());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double ux = d.ux.values()[k], uy = d.uy.values()[k];
    q.values()[k] = ux * ux * d.uyy.values()[k] - 2.0 * ux * uy * d.uxy.values()[k] +
                    uy * uy * d.uxx.values()[k];
  }
  return q;
}

ScalarField q2_field(const ScalarField& u) { return q2_field(derivatives(u)); }

ScalarField curvature_field(const ScalarField& u, double eps_g) {
  const ScalarField q = q2_field(u);
  const ScalarField g = smoothed_grad_magnitude(u, eps_g);
  ScalarField kappa(u.height(), u.width());
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    const double gk = g.values()[k];
    kappa.values()[k] = -q.values()[k] / (gk * gk * gk);
  }
  return kappa;
}

ViolationReport check_zero_order(const ScalarField& u, const ConditionConfig& cfg) {
  cfg.validate();
  const OffsetSet offsets = make_offsets(cfg.radius);
  const long h = static_cast<long>(u.height());
  const long w = static_cast<long>(u.width());
  ScalarField mag(u.height(), u.width());
  for (long i = 0; i < h; ++i)
    for (long j = 0; j < w; ++j) {
      const double uy = u(i, j);
      for (const Offset& d : offsets) {
        const long zi = i + 2 * d.dx, zj = j + 2 * d.dy;
        if (!u.contains(zi, zj)) continue;
        const std::size_t mi = static_cast<std::size_t>(i + d.dx);
        const std::size_t mj = static_cast<std::size_t>(j + d.dy);
        const double lack = std::min(uy, u(zi, zj)) - u(mi, mj);
        if (lack > mag(mi, mj)) mag(mi, mj) = lack;
      }
    }
  return ViolationReport::from_magnitude(std::move(mag), cfg.tolerance);
}

ViolationReport check_first_order(const ScalarField& u, const ConditionConfig& cfg) {
  cfg.validate();
  const OffsetSet offsets = make_offsets(cfg.radius);
  const auto [ux, uy] = gradient(u);
  ScalarField mag(u.height(), u.width());
  for (std::size_t i = 0; i < u.height(); ++i)
    for (std::size_t j = 0; j < u.width(); ++j) {
      if (!in_interior(i, j, u.height(), u.width(), cfg.border)) continue;
      double worst = 0.0;
      for (const Offset& d : offsets) {
        const long xi = static_cast<long>(i) + d.dx, xj = static_cast<long>(j) + d.dy;
        if (!u.contains(xi, xj)) continue;
        if (u(static_cast<std::size_t>(xi), static_cast<std::size_t>(xj)) < u(i, j)) continue;
        const double slope = ux(i, j) * d.dx + uy(i, j) * d.dy;
        worst = std::max(worst, -slope);
      }
      mag(i, j) = worst;
    }
  return ViolationReport::from_magnitude(std::move(mag), cfg.tolerance);
}

ViolationReport check_second_order(const ScalarField& u, const ConditionConfig& cfg) {
  cfg.validate();
  const ScalarField q = q2_field(u);
  const ScalarField g = smoothed_grad_magnitude(u, cfg.eps_g);
  ScalarField mag(u.height(), u.width());
  for (std::size_t i = 0; i < u.height(); ++i)
    for (std::size_t j = 0; j < u.width(); ++j)
      if (in_interior(i, j, u.height(), u.width(), cfg.border))
        mag(i, j) = g(i, j) * std::max(0.0, q(i, j) + cfg.delta);
  return ViolationReport::from_magnitude(std::move(mag), cfg.tolerance);
}

ScalarField half_disk_ratio(const BinaryMask& mask, double radius) {
  if (!(radius >= 1.0)) throw std::invalid_argument("half_disk_ratio: radius must be >= 1");
  const std::vector<Offset> ball = make_ball(radius);
  const double area = static_cast<double>(ball.size());
  ScalarField ratio(mask.height(), mask.width());
  for (std::size_t i = 0; i < mask.height(); ++i)
    for (std::size_t j = 0; j < mask.width(); ++j) {
      if (mask(i, j)) continue;
      std::size_t hits = 0;
      for (const Offset& d : ball)
        if (mask.value_or_false(static_cast<long>(i) + d.dx, static_cast<long>(j) + d.dy)) ++hits;
      ratio(i, j) = static_cast<double>(hits) / area;
    }
  return ratio;
}

double ball_ring_slack(double radius) {
  const std::vector<Offset> ball = make_ball(radius);
  const double r2 = radius * radius;
  auto inside = [&](int a, int b) { return a * a + b * b <= r2; };
  std::size_t ring = 0;
  for (const Offset& d : ball)
    if (!inside(d.dx + 1, d.dy) || !inside(d.dx - 1, d.dy) || !inside(d.dx, d.dy + 1) ||
        !inside(d.dx, d.dy - 1))
      ++ring;
  return static_cast<double>(ring) / static_cast<double>(ball.size());
}

ScalarField margin_field(std::span<const ScalarField> logits, std::size_t m) {
  if (logits.size() < 2) throw std::invalid_argument("margin_field: need at least two classes");
  if (m >= logits.size()) throw std::invalid_argument("margin_field: class index out of range");
  for (const auto& f : logits) require_same_shape(logits[0], f, "margin_field");
  const ScalarField& own = logits[m];
  ScalarField out(own.height(), own.width());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double best_other = -INFINITY;
    for (std::size_t c = 0; c < logits.size(); ++c)
      if (c != m) best_other = std::max(best_other, logits[c].values()[k]);
    out.values()[k] = own.values()[k] - best_other;
  }
  return out;
}

}  // namespace qconvex
