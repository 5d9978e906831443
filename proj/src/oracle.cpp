#include "qconvex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>

#include "qconvex/convexify.hpp"

namespace qconvex {
namespace {

double box_sdf(double px, double py, double bx, double by) {
  const double qx = std::abs(px) - bx;
  const double qy = std::abs(py) - by;
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  const double inside = std::min(std::max(qx, qy), 0.0);
  return outside + inside;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

long cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

BinaryMask mask_from(std::size_t h, std::size_t w, const std::function<bool(double, double)>& in) {
  BinaryMask m(h, w);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) m.set(i, j, in(static_cast<double>(i), static_cast<double>(j)));
  return m;
}

}  // namespace

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Disk: return "disk";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Star: return "star";
    case ShapeKind::Cross: return "cross";
    case ShapeKind::LShape: return "l_shape";
    case ShapeKind::Crescent: return "crescent";
    case ShapeKind::TwoDisks: return "two_disks";
  }
  return "?";
}

ShapeKind parse_shape_kind(std::string_view text) {
  for (ShapeKind k : kAllShapes)
    if (to_string(k) == text) return k;
  throw std::invalid_argument("unknown shape kind '" + std::string(text) + "'");
}

bool is_convex_kind(ShapeKind kind) {
  return kind == ShapeKind::Disk || kind == ShapeKind::Ellipse;
}

ShapeKind ShapeSpec::kind() const {
  return std::visit(Overloaded{
                        [](const DiskParams&) { return ShapeKind::Disk; },
                        [](const EllipseParams&) { return ShapeKind::Ellipse; },
                        [](const StarParams&) { return ShapeKind::Star; },
                        [](const CrossParams&) { return ShapeKind::Cross; },
                        [](const LShapeParams&) { return ShapeKind::LShape; },
                        [](const CrescentParams&) { return ShapeKind::Crescent; },
                        [](const TwoDisksParams&) { return ShapeKind::TwoDisks; },
                    },
                    params);
}

std::pair<double, double> ShapeSpec::half_extent() const {
  return std::visit(
      Overloaded{
          [](const DiskParams& p) { return std::pair{p.radius, p.radius}; },
          [](const EllipseParams& p) {
            const double c = std::cos(p.angle), s = std::sin(p.angle);
            return std::pair{std::hypot(p.semi_x * c, p.semi_y * s),
                             std::hypot(p.semi_x * s, p.semi_y * c)};
          },
          [](const StarParams& p) { return std::pair{p.radius + p.amplitude, p.radius + p.amplitude}; },
          [](const CrossParams& p) { return std::pair{p.arm_length, p.arm_length}; },
          [](const LShapeParams& p) { return std::pair{p.arm_length, p.arm_length}; },
          [](const CrescentParams& p) { return std::pair{p.outer_radius, p.outer_radius}; },
          [](const TwoDisksParams& p) {
            return std::pair{p.radius, 2.0 * p.radius + 0.5 * p.gap};
          },
      },
      params);
}

double ShapeSpec::signed_distance(double x, double y) const {
  const double px = x - center_x;
  const double py = y - center_y;
  return std::visit(
      Overloaded{
          [&](const DiskParams& p) { return std::hypot(px, py) - p.radius; },
          [&](const EllipseParams& p) {
            // Scaled implicit form; exact sign, approximate distance.
            const double c = std::cos(p.angle), s = std::sin(p.angle);
            const double rx = c * px + s * py;
            const double ry = -s * px + c * py;
            return (std::hypot(rx / p.semi_x, ry / p.semi_y) - 1.0) * std::min(p.semi_x, p.semi_y);
          },
          [&](const StarParams& p) {
            const double theta = std::atan2(py, px);
            return std::hypot(px, py) - (p.radius + p.amplitude * std::cos(p.arms * theta));
          },
          [&](const CrossParams& p) {
            return std::min(box_sdf(px, py, p.arm_length, p.half_width),
                            box_sdf(px, py, p.half_width, p.arm_length));
          },
          [&](const LShapeParams& p) {
            const double l = p.arm_length, t = p.half_width;
            const double bar = box_sdf(px, py - (-l + t), l, t);
            const double foot = box_sdf(px - (l - t), py, t, l);
            return std::min(bar, foot);
          },
          [&](const CrescentParams& p) {
            const double outer = std::hypot(px, py) - p.outer_radius;
            const double inner = std::hypot(px, py - p.offset) - p.inner_radius;
            return std::max(outer, -inner);
          },
          [&](const TwoDisksParams& p) {
            const double shift = p.radius + 0.5 * p.gap;
            return std::min(std::hypot(px, py - shift), std::hypot(px, py + shift)) - p.radius;
          },
      },
      params);
}

ShapeSpec default_shape(ShapeKind kind, std::size_t h, std::size_t w, double sharpness) {
  // Proportions chosen for 128 x 128 and scaled to the grid.
  const double s = static_cast<double>(std::min(h, w)) / 128.0;
  ShapeSpec spec;
  spec.center_x = 0.5 * static_cast<double>(h - 1);
  spec.center_y = 0.5 * static_cast<double>(w - 1);
  spec.sharpness = sharpness;
  switch (kind) {
    case ShapeKind::Disk: spec.params = DiskParams{30.0 * s}; break;
    case ShapeKind::Ellipse: spec.params = EllipseParams{38.0 * s, 22.0 * s, 0.5}; break;
    case ShapeKind::Star: spec.params = StarParams{34.0 * s, 12.0 * s, 5}; break;
    case ShapeKind::Cross: spec.params = CrossParams{40.0 * s, 12.0 * s}; break;
    case ShapeKind::LShape: spec.params = LShapeParams{40.0 * s, 14.0 * s}; break;
    case ShapeKind::Crescent: spec.params = CrescentParams{36.0 * s, 30.0 * s, 18.0 * s}; break;
    case ShapeKind::TwoDisks: spec.params = TwoDisksParams{20.0 * s, 12.0 * s}; break;
  }
  return spec;
}

ScalarField make_shape(const ShapeSpec& spec, std::size_t h, std::size_t w) {
  if (!(spec.sharpness > 0.0)) throw std::invalid_argument("make_shape: sharpness must be > 0");
  constexpr double kMargin = 4.0;
  const auto [ex, ey] = spec.half_extent();
  if (spec.center_x - ex < kMargin || spec.center_x + ex > static_cast<double>(h) - 1.0 - kMargin ||
      spec.center_y - ey < kMargin || spec.center_y + ey > static_cast<double>(w) - 1.0 - kMargin)
    throw std::invalid_argument("make_shape: " + std::string(to_string(spec.kind())) +
                                " does not fit the grid with a 4-pixel margin");
  return ScalarField::generate(h, w, [&](std::size_t i, std::size_t j) {
    const double sdf = spec.signed_distance(static_cast<double>(i), static_cast<double>(j));
    return sigmoid(-spec.sharpness * sdf);
  });
}

std::vector<Point> convex_hull(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty input");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Point> hull(2 * points.size());
  std::size_t k = 0;
  for (const Point& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

bool in_convex_polygon(std::span<const Point> hull, double x, double y) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return x == static_cast<double>(hull[0].x) && y == static_cast<double>(hull[0].y);
  if (hull.size() == 2) {
    const double ax = static_cast<double>(hull[0].x), ay = static_cast<double>(hull[0].y);
    const double bx = static_cast<double>(hull[1].x), by = static_cast<double>(hull[1].y);
    const double c = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
    if (c != 0.0) return false;
    const double t = (x - ax) * (bx - ax) + (y - ay) * (by - ay);
    const double len2 = (bx - ax) * (bx - ax) + (by - ay) * (by - ay);
    return t >= 0.0 && t <= len2;
  }
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const Point& a = hull[k];
    const Point& b = hull[(k + 1) % hull.size()];
    const double c = static_cast<double>(b.x - a.x) * (y - static_cast<double>(a.y)) -
                     static_cast<double>(b.y - a.y) * (x - static_cast<double>(a.x));
    if (c < 0.0) return false;
  }
  return true;
}

BinaryMask rasterize_convex_polygon(std::span<const Point> hull, std::size_t h, std::size_t w) {
  return mask_from(h, w, [&](double x, double y) { return in_convex_polygon(hull, x, y); });
}

HullDeficit hull_deficit(const BinaryMask& mask) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < mask.height(); ++i)
    for (std::size_t j = 0; j < mask.width(); ++j)
      if (mask(i, j)) pts.push_back({static_cast<long>(i), static_cast<long>(j)});
  if (pts.empty()) throw EmptySetError("hull_deficit: super-level set is empty");

  const std::vector<Point> hull = convex_hull(pts);
  long min_x = hull[0].x, max_x = hull[0].x, min_y = hull[0].y, max_y = hull[0].y;
  for (const Point& p : hull) {
    min_x = std::min(min_x, p.x), max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y), max_y = std::max(max_y, p.y);
  }
  HullDeficit out;
  out.set_area = pts.size();
  for (long i = min_x; i <= max_x; ++i)
    for (long j = min_y; j <= max_y; ++j)
      if (in_convex_polygon(hull, static_cast<double>(i), static_cast<double>(j))) ++out.hull_area;
  if (hull.size() >= 2)
    for (std::size_t k = 0; k < hull.size(); ++k) {
      const Point& a = hull[k];
      const Point& b = hull[(k + 1) % hull.size()];
      out.perimeter += std::hypot(static_cast<double>(b.x - a.x), static_cast<double>(b.y - a.y));
    }
  out.deficit = static_cast<double>(out.hull_area - out.set_area) /
                static_cast<double>(std::max<std::size_t>(out.hull_area, 1));
  return out;
}

HullDeficit hull_deficit(const ScalarField& u, double gamma) {
  HullDeficit d = hull_deficit(threshold(u, gamma));
  d.gamma = gamma;
  return d;
}

std::vector<ViolationReport> brute_force_per_level(const ScalarField& u,
                                                   std::span<const double> gammas, double tol,
                                                   std::size_t max_pairs) {
  if (gammas.empty()) throw std::invalid_argument("brute_force_quasiconcave: no levels given");
  if (max_pairs == 0) throw std::invalid_argument("brute_force_quasiconcave: max_pairs must be > 0");
  std::vector<ViolationReport> reports;
  for (double gamma : gammas) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < u.height(); ++i)
      for (std::size_t j = 0; j < u.width(); ++j)
        if (u(i, j) >= gamma) pts.push_back({static_cast<long>(i), static_cast<long>(j)});

    const std::size_t n = pts.size();
    const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
    const std::size_t stride = std::max<std::size_t>(1, (total + max_pairs - 1) / max_pairs);
    ScalarField mag(u.height(), u.width());
    std::size_t counter = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b, ++counter) {
        if (counter % stride != 0) continue;
        const Point p = pts[a], q = pts[b];
        const long dx = q.x - p.x, dy = q.y - p.y;
        const long g = std::gcd(std::abs(dx), std::abs(dy));
        const double lo = std::min(u(p.x, p.y), u(q.x, q.y));
        for (long k = 1; k < g; ++k) {
          const std::size_t rx = static_cast<std::size_t>(p.x + k * dx / g);
          const std::size_t ry = static_cast<std::size_t>(p.y + k * dy / g);
          const double lack = lo - u(rx, ry);
          if (lack > tol && lack > mag(rx, ry)) mag(rx, ry) = lack;
        }
      }
    reports.push_back(ViolationReport::from_magnitude(std::move(mag), tol));
  }
  return reports;
}

ViolationReport brute_force_quasiconcave(const ScalarField& u, std::span<const double> gammas,
                                         double tol, std::size_t max_pairs) {
  const std::vector<ViolationReport> levels = brute_force_per_level(u, gammas, tol, max_pairs);
  ScalarField worst(u.height(), u.width());
  for (const ViolationReport& r : levels)
    for (std::size_t k = 0; k < worst.size(); ++k)
      worst.values()[k] = std::max(worst.values()[k], r.magnitude.values()[k]);
  return ViolationReport::from_magnitude(std::move(worst), tol);
}

ScalarField fd_gradient(LossKind kind, const ScalarField& u, const LossConfig& cfg, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_gradient: step must be > 0");
  ScalarField probe = u;
  ScalarField grad(u.height(), u.width());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double base = u.values()[k];
    probe.values()[k] = base + step;
    const double up = loss(kind, probe, cfg).value;
    probe.values()[k] = base - step;
    const double down = loss(kind, probe, cfg).value;
    probe.values()[k] = base;
    grad.values()[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

ScalarField kink_distance(LossKind kind, const ScalarField& u, const LossConfig& cfg) {
  const std::size_t h = u.height(), w = u.width();
  ScalarField dist(h, w, INFINITY);
  auto visit = [&](long pi, long pj, double value) {
    if (!u.contains(pi, pj)) return;
    double& slot = dist(static_cast<std::size_t>(pi), static_cast<std::size_t>(pj));
    slot = std::min(slot, std::abs(value));
  };
  if (kind == LossKind::SecondOrder) {
    // Q2 at x reads u at x + s for these s.
    constexpr Offset kSupport[] = {{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const ScalarField q = q2_field(u);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        if (!in_interior(i, j, h, w, cfg.border)) continue;
        for (const Offset& s : kSupport)
          visit(static_cast<long>(i) + s.dx, static_cast<long>(j) + s.dy, q(i, j) + cfg.delta);
      }
  } else {
    // grad u(y) reads u at y, y + (1,0), y + (0,1).
    constexpr Offset kSupport[] = {{0, 0}, {1, 0}, {0, 1}};
    const OffsetSet offsets = make_offsets(cfg.radius);
    const auto [ux, uy] = gradient(u);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        if (!in_interior(i, j, h, w, cfg.border)) continue;
        double nearest = INFINITY;
        for (const Offset& d : offsets)
          if (u.contains(static_cast<long>(i) + d.dx, static_cast<long>(j) + d.dy))
            nearest = std::min(nearest, std::abs(ux(i, j) * d.dx + uy(i, j) * d.dy));
        for (const Offset& s : kSupport)
          visit(static_cast<long>(i) + s.dx, static_cast<long>(j) + s.dy, nearest);
      }
  }
  return dist;
}

GradientCheck gradient_check(LossKind kind, const ScalarField& u, const LossConfig& cfg,
                             double step, double kink_margin, double rel_floor) {
  GradientCheck out;
  out.analytic = loss_gradient(kind, u, cfg);
  out.numeric = fd_gradient(kind, u, cfg, step);
  const ScalarField dist = kink_distance(kind, u, cfg);
  // FD roundoff is about eps * L / step in absolute terms, so tiny entries are
  // compared against a fraction of the largest one instead of themselves.
  double scale = 0.0;
  for (double v : out.numeric.values()) scale = std::max(scale, std::abs(v));
  const double floor = rel_floor * scale;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (dist.values()[k] < kink_margin) {
      ++out.excluded;
      continue;
    }
    const double a = out.analytic.values()[k];
    const double n = out.numeric.values()[k];
    const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
    out.max_rel_error = std::max(out.max_rel_error, rel);
    ++out.checked;
  }
  return out;
}

ScalarField random_field(std::uint64_t seed, std::size_t h, std::size_t w, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField f(h, w);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

std::size_t count_components(const BinaryMask& mask) {
  std::vector<std::uint8_t> seen(mask.size(), 0);
  const long h = static_cast<long>(mask.height()), w = static_cast<long>(mask.width());
  std::size_t components = 0;
  std::deque<std::pair<long, long>> queue;
  for (long i = 0; i < h; ++i)
    for (long j = 0; j < w; ++j) {
      if (!mask.value_or_false(i, j) || seen[static_cast<std::size_t>(i * w + j)]) continue;
      ++components;
      seen[static_cast<std::size_t>(i * w + j)] = 1;
      queue.emplace_back(i, j);
      while (!queue.empty()) {
        const auto [ci, cj] = queue.front();
        queue.pop_front();
        for (long a = -1; a <= 1; ++a)
          for (long b = -1; b <= 1; ++b) {
            const long ni = ci + a, nj = cj + b;
            if (!mask.value_or_false(ni, nj) || seen[static_cast<std::size_t>(ni * w + nj)]) continue;
            seen[static_cast<std::size_t>(ni * w + nj)] = 1;
            queue.emplace_back(ni, nj);
          }
      }
    }
  return components;
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  if (a.height() != b.height() || a.width() != b.width())
    throw std::invalid_argument("dice: shape mismatch");
  std::size_t both = 0;
  for (std::size_t i = 0; i < a.height(); ++i)
    for (std::size_t j = 0; j < a.width(); ++j)
      if (a(i, j) && b(i, j)) ++both;
  const std::size_t total = a.count() + b.count();
  return total == 0 ? 1.0 : 2.0 * static_cast<double>(both) / static_cast<double>(total);
}

std::vector<Point> random_convex_polygon(std::uint64_t seed, std::size_t h, std::size_t w,
                                         std::size_t n_points, long margin) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> xs(margin, static_cast<long>(h) - 1 - margin);
  std::uniform_int_distribution<long> ys(margin, static_cast<long>(w) - 1 - margin);
  std::vector<Point> pts(n_points);
  for (Point& p : pts) p = {xs(rng), ys(rng)};
  return convex_hull(std::move(pts));
}

std::vector<CorpusMask> make_corpus(std::size_t size, std::uint64_t seed) {
  const std::size_t n = size;
  const double c = 0.5 * static_cast<double>(n - 1);
  const double s = static_cast<double>(n) / 96.0;
  std::vector<CorpusMask> corpus;
  auto from_spec = [&](std::string name, ShapeParams params, double cx, double cy, bool convex) {
    ShapeSpec spec{cx, cy, params, 4.0};
    corpus.push_back({std::move(name), threshold(make_shape(spec, n, n), 0.5), convex});
  };
  auto disk = [](double x, double y, double cx, double cy, double r) {
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
  };
  auto box = [](double x, double y, double x0, double x1, double y0, double y1) {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  };

  from_spec("disk_large", DiskParams{30 * s}, c, c, true);
  from_spec("disk_offset", DiskParams{16 * s}, c - 14 * s, c + 18 * s, true);
  from_spec("ellipse_tilted", EllipseParams{34 * s, 16 * s, 0.4}, c, c, true);
  from_spec("ellipse_steep", EllipseParams{14 * s, 38 * s, 1.1}, c, c, true);
  for (std::uint64_t k = 0; k < 6; ++k) {
    const std::vector<Point> hull = random_convex_polygon(seed + k, n, n);
    corpus.push_back({"polygon_" + std::to_string(k), rasterize_convex_polygon(hull, n, n), true});
  }

  from_spec("star5", StarParams{26 * s, 10 * s, 5}, c, c, false);
  from_spec("star3", StarParams{24 * s, 12 * s, 3}, c, c, false);
  from_spec("cross", CrossParams{36 * s, 10 * s}, c, c, false);
  from_spec("l_shape", LShapeParams{36 * s, 11 * s}, c, c, false);
  from_spec("crescent", CrescentParams{34 * s, 28 * s, 16 * s}, c, c, false);
  from_spec("two_disks", TwoDisksParams{17 * s, 8 * s}, c, c, false);
  corpus.push_back({"ring", mask_from(n, n, [&](double x, double y) {
                      return disk(x, y, c, c, 34 * s) && !disk(x, y, c, c, 18 * s);
                    }), false});
  corpus.push_back({"t_shape", mask_from(n, n, [&](double x, double y) {
                      return box(x, y, c - 34 * s, c - 18 * s, c - 34 * s, c + 34 * s) ||
                             box(x, y, c - 18 * s, c + 34 * s, c - 8 * s, c + 8 * s);
                    }), false});
  corpus.push_back({"u_shape", mask_from(n, n, [&](double x, double y) {
                      return box(x, y, c - 34 * s, c + 34 * s, c - 34 * s, c - 18 * s) ||
                             box(x, y, c - 34 * s, c + 34 * s, c + 18 * s, c + 34 * s) ||
                             box(x, y, c + 18 * s, c + 34 * s, c - 34 * s, c + 34 * s);
                    }), false});
  // Half-disk notch centred on the longest edge.
  const std::vector<Point> bitten = random_convex_polygon(seed + 100, n, n, 16, 4);
  double best = -1.0, bx = c, by = c;
  for (std::size_t k = 0; k < bitten.size(); ++k) {
    const Point& p = bitten[k];
    const Point& q = bitten[(k + 1) % bitten.size()];
    const double len = std::hypot(double(q.x - p.x), double(q.y - p.y));
    if (len > best) {
      best = len;
      bx = (p.x + q.x) / 2.0;
      by = (p.y + q.y) / 2.0;
    }
  }
  corpus.push_back({"bitten_polygon", mask_from(n, n, [&](double x, double y) {
                      return in_convex_polygon(bitten, x, y) && !disk(x, y, bx, by, 18 * s);
                    }), false});
  return corpus;
}

}  // namespace qconvex
