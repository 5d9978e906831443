#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qconvex/conditions.hpp"
#include "qconvex/grid.hpp"
#include "qconvex/losses.hpp"

namespace qconvex {

// Brute-force reference implementations and synthetic inputs. Nothing in here
// is used by the library code paths it is meant to check.

enum class ShapeKind { Disk, Ellipse, Star, Cross, LShape, Crescent, TwoDisks };

inline constexpr ShapeKind kAllShapes[] = {ShapeKind::Disk,   ShapeKind::Ellipse,
                                           ShapeKind::Star,   ShapeKind::Cross,
                                           ShapeKind::LShape, ShapeKind::Crescent,
                                           ShapeKind::TwoDisks};

std::string_view to_string(ShapeKind kind);
ShapeKind parse_shape_kind(std::string_view text);
bool is_convex_kind(ShapeKind kind);

struct DiskParams { double radius; };
struct EllipseParams { double semi_x, semi_y, angle; };
struct StarParams { double radius, amplitude; int arms; };
struct CrossParams { double arm_length, half_width; };
struct LShapeParams { double arm_length, half_width; };
// Outer disk minus an inner disk shifted by `offset` along y.
struct CrescentParams { double outer_radius, inner_radius, offset; };
// Two equal disks separated by `gap` pixels along y.
struct TwoDisksParams { double radius, gap; };

using ShapeParams = std::variant<DiskParams, EllipseParams, StarParams, CrossParams,
                                 LShapeParams, CrescentParams, TwoDisksParams>;

struct ShapeSpec {
  double center_x = 0.0;  // row
  double center_y = 0.0;  // column
  ShapeParams params = DiskParams{10.0};
  double sharpness = 1.0;  // sigmoid steepness applied to -SDF

  ShapeKind kind() const;
  /// Half extents of the shape's bounding box around the centre.
  std::pair<double, double> half_extent() const;
  double signed_distance(double x, double y) const;  // negative inside
};

/// A centred shape of the given kind scaled to an h x w grid.
ShapeSpec default_shape(ShapeKind kind, std::size_t h, std::size_t w, double sharpness = 1.0);

/// sigmoid(sharpness * -SDF). Throws invalid_argument unless the shape keeps
/// a 4-pixel margin to every edge.
ScalarField make_shape(const ShapeSpec& spec, std::size_t h, std::size_t w);

struct Point {
  long x = 0;
  long y = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Monotone-chain hull, counter-clockwise in (x, y). Collinear inputs give the
/// two extreme points; a single distinct point gives itself.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Inclusive point-in-convex-polygon test (polygon counter-clockwise).
bool in_convex_polygon(std::span<const Point> hull, double x, double y);
BinaryMask rasterize_convex_polygon(std::span<const Point> hull, std::size_t h, std::size_t w);

class EmptySetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HullDeficit {
  double gamma = 0.0;
  double deficit = 0.0;  // (hull_area - set_area) / max(hull_area, 1)
  std::size_t hull_area = 0;
  std::size_t set_area = 0;
  double perimeter = 0.0;  // hull perimeter in pixels

  /// Rasterisation budget: hull perimeter / hull area.
  double slack() const { return hull_area ? perimeter / static_cast<double>(hull_area) : 0.0; }
};

HullDeficit hull_deficit(const ScalarField& u, double gamma);
HullDeficit hull_deficit(const BinaryMask& mask);

inline constexpr std::size_t kMaxBruteForcePairs = 1'000'000;

/// Exhaustive segment check of every super-level set. For each gamma and each
/// pair of set pixels, every lattice point on the segment between them must
/// satisfy u >= min(endpoints) - tol. Larger pair counts are subsampled with
/// a fixed stride.
std::vector<ViolationReport> brute_force_per_level(const ScalarField& u,
                                                   std::span<const double> gammas, double tol,
                                                   std::size_t max_pairs = kMaxBruteForcePairs);
/// Pixelwise worst case over all levels.
ViolationReport brute_force_quasiconcave(const ScalarField& u, std::span<const double> gammas,
                                         double tol,
                                         std::size_t max_pairs = kMaxBruteForcePairs);

/// Central differences (L(u + step e_p) - L(u - step e_p)) / (2 step).
ScalarField fd_gradient(LossKind kind, const ScalarField& u, const LossConfig& cfg, double step);

/// Distance of each pixel's perturbation from the nearest ReLU / indicator
/// switch it can flip: |Q2 + delta| at every interior pixel whose stencils read
/// p (second order), |grad u(y).d| at every anchor y whose gradient reads p
/// (first order). +inf when p influences no gate.
ScalarField kink_distance(LossKind kind, const ScalarField& u, const LossConfig& cfg);

struct GradientCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t excluded = 0;  // pixels within kink_margin of a kink
  ScalarField analytic;
  ScalarField numeric;
};

/// Relative error |a - n| / max(|a|, |n|, rel_floor * max|n|) between the
/// analytic gradient and central differences, over pixels at least
/// kink_margin from every kink.
GradientCheck gradient_check(LossKind kind, const ScalarField& u, const LossConfig& cfg,
                             double step = 1e-6, double kink_margin = 1e-4,
                             double rel_floor = 1e-3);

/// Uniform entries in [lo, hi] from a seeded mt19937_64.
ScalarField random_field(std::uint64_t seed, std::size_t h, std::size_t w, double lo = 0.05,
                         double hi = 0.95);

std::size_t count_components(const BinaryMask& mask);  // 8-connected
double dice(const BinaryMask& a, const BinaryMask& b);

struct CorpusMask {
  std::string name;
  BinaryMask mask;
  bool convex;
};

/// Twenty binary masks, ten digitally convex and ten clearly not.
std::vector<CorpusMask> make_corpus(std::size_t size = 96, std::uint64_t seed = 7);

/// Hull of random integer points inside [margin, n-1-margin]^2.
std::vector<Point> random_convex_polygon(std::uint64_t seed, std::size_t h, std::size_t w,
                                         std::size_t n_points = 12, long margin = 6);

}  // namespace qconvex
