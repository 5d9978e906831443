#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qconvex/conditions.hpp"
#include "qconvex/convexify.hpp"
#include "qconvex/oracle.hpp"

using namespace qconvex;

namespace {

bool pointwise_leq(const ScalarField& a, const ScalarField& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a.values()[k] > b.values()[k]) return false;
  return true;
}

ScalarField two_disks(std::size_t n, double radius, double gap) {
  const double c = (n - 1) / 2.0, off = radius + gap / 2.0;
  return ScalarField::generate(n, n, [&](auto i, auto j) {
    const double a = std::hypot(i - c, j - (c - off)), b = std::hypot(i - c, j - (c + off));
    return (a <= radius || b <= radius) ? 1.0 : 0.0;
  });
}

ConditionConfig radius_cfg(double r) {
  ConditionConfig c;
  c.radius = r;
  return c;
}

}  // namespace

TEST_CASE("1-0-1 row fills in one sweep") {
  const ScalarField row(1, 3, std::vector<double>{1, 0, 1});
  const auto one = midpoint_convexify(row, 1.0, 1);
  CHECK(one.field == ScalarField(1, 3, 1.0));
  CHECK(one.trace.iterations == 1);
  const auto full = midpoint_convexify(row, 1.0, 100);
  CHECK(full.field == ScalarField(1, 3, 1.0));
  CHECK(full.trace.objective_history.size() == full.trace.iterations);
  CHECK(full.trace.final_linf_step == 0.0);
}

TEST_CASE("convex disk is a fixed point") {
  const auto disk = threshold(make_shape(default_shape(ShapeKind::Disk, 64, 64, 4.0), 64, 64), 0.5).to_field();
  REQUIRE(check_zero_order(disk, radius_cfg(3)).holds());
  const auto out = midpoint_convexify(disk, 3.0, 50);
  CHECK(out.trace.iterations == 1);
  CHECK(out.field == disk);
  CHECK(check_zero_order(out.field, radius_cfg(3)).holds());
}

TEST_CASE("small radius keeps separate objects apart") {
  const std::size_t n = 60;
  const double gap = 8.0;
  const auto u = two_disks(n, 10.0, gap);
  REQUIRE(count_components(threshold(u, 0.5)) == 2);
  const auto small = midpoint_convexify(u, 2.0, 1000).field;
  CHECK(small == u);
  CHECK(count_components(threshold(small, 0.5)) == 2);
  const auto large = midpoint_convexify(u, gap + 2.0, 1000).field;
  CHECK(threshold(large, 0.5).count() > threshold(u, 0.5).count());
  CHECK(count_components(threshold(large, 0.5)) == 1);
}

TEST_CASE("sweeps are monotone and bounded") {
  for (auto kind : {ShapeKind::Star, ShapeKind::Crescent, ShapeKind::LShape}) {
    const auto u = make_shape(default_shape(kind, 48, 48, 1.0), 48, 48);
    ScalarField prev = u;
    for (std::size_t t = 1; t <= 6; ++t) {
      const auto cur = midpoint_convexify(u, 2.0, t).field;
      CHECK(pointwise_leq(prev, cur));
      CHECK(cur.max() <= u.max());
      prev = cur;
    }
    const auto res = midpoint_convexify(u, 2.0, 100000);
    CHECK(res.trace.objective_history.size() == res.trace.iterations);
    CHECK(res.trace.objective_history.back() == 0.0);
  }
}

TEST_CASE("termination on quantized input") {
  auto u = random_field(3, 12, 12, 0.0, 1.0);
  for (double& v : u.values()) v = std::round(v * 255.0) / 255.0;
  const std::size_t t_max = 256 * u.size();
  const auto res = midpoint_convexify(u, 2.0, t_max);
  CHECK(res.trace.iterations < t_max);
  CHECK(res.trace.final_linf_step < 1e-12);
  CHECK(check_zero_order(res.field, radius_cfg(2)).holds());
}

TEST_CASE("bounded by the hull fill of every level set") {
  for (auto kind : {ShapeKind::Star, ShapeKind::Cross, ShapeKind::TwoDisks}) {
    const auto u = make_shape(default_shape(kind, 48, 48, 1.0), 48, 48);
    const auto out = midpoint_convexify(u, 3.0, 100000).field;
    for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto set = threshold(u, g);
      std::vector<Point> pts;
      for (std::size_t i = 0; i < 48; ++i)
        for (std::size_t j = 0; j < 48; ++j)
          if (set(i, j)) pts.push_back({long(i), long(j)});
      const auto hull = rasterize_convex_polygon(convex_hull(pts), 48, 48);
      const auto raised = threshold(out, g);
      for (std::size_t i = 0; i < 48; ++i)
        for (std::size_t j = 0; j < 48; ++j)
          if (raised(i, j)) CHECK(hull(i, j));
    }
  }
}

TEST_CASE("cgpm without regulariser returns the input") {
  const auto o = random_field(2, 16, 16, -3, 3);
  CgpmConfig cfg;
  cfg.lambda = 0.0;
  cfg.early_stop = 0.0;
  const auto res = cgpm(o, cfg);
  CHECK(res.trace.iterations == cfg.t_max);
  CHECK(linf_distance(res.field, sigmoid(o)) <= 1e-12);
  for (double v : res.trace.objective_history) CHECK(v == 0.0);
}

TEST_CASE("cgpm proximal objective does not increase") {
  for (auto kind : kAllShapes) {
    const auto u = make_shape(default_shape(kind, 64, 64, 1.0), 64, 64);
    CgpmConfig cfg;
    const auto res = cgpm(mask_to_logits(u), cfg);
    const auto& h = res.trace.objective_history;
    CHECK(h.size() == res.trace.iterations);
    for (std::size_t t = 1; t < h.size(); ++t) CHECK(h[t] <= h[t - 1] + 1e-9);
    ScalarField o = mask_to_logits(u);
    for (double& v : o.values()) v = std::clamp(v, -cfg.logit_clamp, cfg.logit_clamp);
    CHECK(h.front() <= cgpm_objective(o, o, cfg) + 1e-9);
    for (double v : res.field.values()) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("cgpm keeps a convex ellipse") {
  const auto u = make_shape(default_shape(ShapeKind::Ellipse, 96, 96, 1.0), 96, 96);
  for (auto kind : {LossKind::FirstOrder, LossKind::SecondOrder}) {
    CgpmConfig cfg;
    cfg.loss_kind = kind;
    const auto out = cgpm(mask_to_logits(u), cfg).field;
    CHECK(hull_deficit(out, 0.5).deficit <= hull_deficit(u, 0.5).deficit + 1e-6);
    CHECK(dice(threshold(out, 0.5), threshold(u, 0.5)) >= 0.99);
  }
}

TEST_CASE("cgpm moves logits along the chained gradient") {
  const auto o = random_field(5, 10, 10, -2, 2);
  CgpmConfig cfg;
  cfg.t_max = 1;
  cfg.lambda = 50.0;
  cfg.loss.border = 1;
  const auto res = cgpm(o, cfg);
  const auto u = sigmoid(o);
  const auto g = grad_wrt_logits(grad_second_order(u, cfg.loss), u);
  ScalarField expect(10, 10);
  for (std::size_t k = 0; k < o.size(); ++k)
    expect.values()[k] = sigmoid(o.values()[k] - cfg.eta * cfg.lambda * g.values()[k]);
  CHECK(linf_distance(res.field, expect) < 1e-15);

  cfg.chain_rule = false;
  const auto raw = cgpm(o, cfg);
  const auto gu = grad_second_order(u, cfg.loss);
  for (std::size_t k = 0; k < o.size(); ++k)
    expect.values()[k] = sigmoid(o.values()[k] - cfg.eta * cfg.lambda * gu.values()[k]);
  CHECK(linf_distance(raw.field, expect) < 1e-15);
}

TEST_CASE("cgpm clamps logits and rejects bad input") {
  const ScalarField big(6, 6, 40.0);
  const auto res = cgpm(big, {});
  CHECK(res.field.max() == doctest::Approx(sigmoid(16.0)));
  ScalarField bad(4, 4);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cgpm(bad, {}), std::invalid_argument);
  CgpmConfig cfg;
  cfg.eta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = CgpmConfig{};
  cfg.t_max = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("mask to logits round trip") {
  const auto u = random_field(6, 5, 5);
  CHECK(linf_distance(sigmoid(mask_to_logits(u)), u) < 1e-12);
  const auto sat = mask_to_logits(ScalarField(2, 2, 1.0));
  CHECK(std::isfinite(sat.max()));
  CHECK(sigmoid(0.0) == 0.5);
}
