#include "qconvex/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qconvex/conditions.hpp"

namespace qconvex {
namespace {

void add_into(ScalarField& acc, const ScalarField& term) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc.values()[k] += term.values()[k];
}

void scale(ScalarField& f, double s) {
  for (double& v : f.values()) v *= s;
}

}  // namespace

void LossConfig::validate() const {
  if (!(radius >= 1.0)) throw std::invalid_argument("LossConfig: radius must be >= 1");
  if (!(eps_sigmoid > 0.0)) throw std::invalid_argument("LossConfig: eps_sigmoid must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("LossConfig: delta must be >= 0");
  if (!(eps_g > 0.0)) throw std::invalid_argument("LossConfig: eps_g must be > 0");
}

std::string_view to_string(LossKind kind) {
  return kind == LossKind::FirstOrder ? "1st" : "2nd";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "1st" || text == "first" || text == "first_order") return LossKind::FirstOrder;
  if (text == "2nd" || text == "second" || text == "second_order") return LossKind::SecondOrder;
  throw std::invalid_argument("unknown loss kind '" + std::string(text) + "'");
}

double soft_sigmoid(double t, double eps) {
  const double z = t / eps;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LossResult loss_first_order(const ScalarField& u, const LossConfig& cfg) {
  cfg.validate();
  const OffsetSet offsets = make_offsets(cfg.radius);
  const auto [ux, uy] = gradient(u);
  LossResult out{0.0, ScalarField(u.height(), u.width())};
  for (std::size_t i = 0; i < u.height(); ++i)
    for (std::size_t j = 0; j < u.width(); ++j) {
      if (!in_interior(i, j, u.height(), u.width(), cfg.border)) continue;
      double acc = 0.0;
      for (const Offset& d : offsets) {
        const long xi = static_cast<long>(i) + d.dx, xj = static_cast<long>(j) + d.dy;
        if (!u.contains(xi, xj)) continue;
        const double slope = ux(i, j) * d.dx + uy(i, j) * d.dy;
        if (slope >= 0.0) continue;
        acc += soft_sigmoid(u(xi, xj) - u(i, j), cfg.eps_sigmoid) * -slope;
      }
      out.per_pixel(i, j) = acc;
    }
  out.value = out.per_pixel.sum() / static_cast<double>(u.size());
  return out;
}

LossResult loss_second_order(const ScalarField& u, const LossConfig& cfg) {
  cfg.validate();
  const ScalarField q = q2_field(u);
  const ScalarField g = smoothed_grad_magnitude(u, cfg.eps_g);
  LossResult out{0.0, ScalarField(u.height(), u.width())};
  for (std::size_t i = 0; i < u.height(); ++i)
    for (std::size_t j = 0; j < u.width(); ++j)
      if (in_interior(i, j, u.height(), u.width(), cfg.border))
        out.per_pixel(i, j) = g(i, j) * std::max(0.0, q(i, j) + cfg.delta);
  out.value = out.per_pixel.sum() / static_cast<double>(u.size());
  return out;
}

FirstOrderGradientTerms grad_first_order_terms(const ScalarField& u, const LossConfig& cfg) {
  cfg.validate();
  const OffsetSet offsets = make_offsets(cfg.radius);
  const auto [ux, uy] = gradient(u);
  const std::size_t h = u.height(), w = u.width();
  ScalarField source(h, w), anchor(h, w), cx(h, w), cy(h, w);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      if (!in_interior(i, j, h, w, cfg.border)) continue;
      for (const Offset& d : offsets) {
        const long xi = static_cast<long>(i) + d.dx, xj = static_cast<long>(j) + d.dy;
        if (!u.contains(xi, xj)) continue;
        const double slope = ux(i, j) * d.dx + uy(i, j) * d.dy;
        if (slope >= 0.0) continue;  // H = 1[slope < 0]
        const double s = soft_sigmoid(u(xi, xj) - u(i, j), cfg.eps_sigmoid);
        const double ds = s * (1.0 - s) / cfg.eps_sigmoid;
        const double pair = ds * -slope;
        source(static_cast<std::size_t>(xi), static_cast<std::size_t>(xj)) += pair;
        anchor(i, j) -= pair;
        cx(i, j) -= s * d.dx;
        cy(i, j) -= s * d.dy;
      }
    }
  ScalarField through_stencil = apply_adjoint(StencilKind::Dx, cx);
  add_into(through_stencil, apply_adjoint(StencilKind::Dy, cy));

  const double inv_n = 1.0 / static_cast<double>(u.size());
  scale(source, inv_n);
  scale(anchor, inv_n);
  scale(through_stencil, inv_n);
  return {std::move(source), std::move(anchor), std::move(through_stencil)};
}

ScalarField grad_first_order(const ScalarField& u, const LossConfig& cfg) {
  FirstOrderGradientTerms t = grad_first_order_terms(u, cfg);
  ScalarField total = std::move(t.source);
  add_into(total, t.anchor);
  add_into(total, t.stencil);
  return total;
}

ScalarField grad_second_order(const ScalarField& u, const LossConfig& cfg) {
  cfg.validate();
  const Derivatives d = derivatives(u);
  const ScalarField q = q2_field(d);
  const std::size_t h = u.height(), w = u.width();

  // Coefficient fields fed to the seven adjoint applications.
  ScalarField mag_x(h, w), mag_y(h, w);       // R ux/|grad u|, R uy/|grad u|
  ScalarField dq_dux(h, w), dq_duy(h, w);     // |grad u| H dQ2/dux, .../duy
  ScalarField dq_duxx(h, w), dq_duyy(h, w);   // |grad u| H uy^2, |grad u| H ux^2
  ScalarField dq_duxy(h, w);                  // |grad u| H (-2 ux uy)
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      if (!in_interior(i, j, h, w, cfg.border)) continue;
      const double ux = d.ux(i, j), uy = d.uy(i, j);
      const double uxx = d.uxx(i, j), uyy = d.uyy(i, j), uxy = d.uxy(i, j);
      const double g = std::sqrt(ux * ux + uy * uy + cfg.eps_g);
      const double shifted = q(i, j) + cfg.delta;
      const double relu = std::max(0.0, shifted);
      const double gate = shifted > 0.0 ? g : 0.0;  // |grad u| * H
      mag_x(i, j) = relu * ux / g;
      mag_y(i, j) = relu * uy / g;
      dq_dux(i, j) = gate * (2.0 * ux * uyy - 2.0 * uy * uxy);
      dq_duy(i, j) = gate * (2.0 * uy * uxx - 2.0 * ux * uxy);
      dq_duxx(i, j) = gate * uy * uy;
      dq_duyy(i, j) = gate * ux * ux;
      dq_duxy(i, j) = gate * (-2.0 * ux * uy);
    }

  ScalarField total = apply_adjoint(StencilKind::Dx, mag_x);
  add_into(total, apply_adjoint(StencilKind::Dy, mag_y));
  add_into(total, apply_adjoint(StencilKind::Dx, dq_dux));
  add_into(total, apply_adjoint(StencilKind::Dy, dq_duy));
  add_into(total, apply_adjoint(StencilKind::Dxx, dq_duxx));
  add_into(total, apply_adjoint(StencilKind::Dyy, dq_duyy));
  add_into(total, apply_adjoint(StencilKind::Dxy, dq_duxy));
  scale(total, 1.0 / static_cast<double>(u.size()));
  return total;
}

LossResult loss(LossKind kind, const ScalarField& u, const LossConfig& cfg) {
  return kind == LossKind::FirstOrder ? loss_first_order(u, cfg) : loss_second_order(u, cfg);
}

ScalarField loss_gradient(LossKind kind, const ScalarField& u, const LossConfig& cfg) {
  return kind == LossKind::FirstOrder ? grad_first_order(u, cfg) : grad_second_order(u, cfg);
}

ScalarField grad_wrt_logits(const ScalarField& grad_u, const ScalarField& u) {
  require_same_shape(grad_u, u, "grad_wrt_logits");
  ScalarField out(u.height(), u.width());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double v = u.values()[k];
    out.values()[k] = grad_u.values()[k] * v * (1.0 - v);
  }
  return out;
}

}  // namespace qconvex
