#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qconvex/grid.hpp"
#include "qconvex/stencil.hpp"

namespace qconvex {

/// Per-pixel inequality residuals of a quasi-concavity check.
struct ViolationReport {
  ScalarField magnitude;  // >= 0 everywhere
  std::size_t count = 0;  // pixels with magnitude > tolerance
  double max_violation = 0.0;
  double tolerance = 0.0;

  static ViolationReport from_magnitude(ScalarField magnitude, double tolerance);
  bool holds() const { return count == 0; }
};

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kGeometryTolerance = 1e-3;

struct ConditionConfig {
  double radius = 2.0;
  double tolerance = kExactTolerance;
  double delta = 0.0;      // second-order margin
  std::size_t border = 2;  // frame excluded from first/second-order checks
  double eps_g = kDefaultEpsGrad;

  void validate() const;
};

/// Q2 = ux^2 uyy - 2 ux uy uxy + uy^2 uxx, the Hessian along the level-set tangent.
ScalarField q2_field(const ScalarField& u);
ScalarField q2_field(const Derivatives& d);

/// Level-contour curvature -Q2 / |grad u|^3 using the smoothed magnitude.
ScalarField curvature_field(const ScalarField& u, double eps_g = kDefaultEpsGrad);

/// Midpoint check: for m = y+d and z = y+2d in bounds, the violation at m is
/// max(0, min(u(y), u(z)) - u(m)), maximised over all triples hitting m.
/// Triples whose reflected point leaves the grid are skipped.
ViolationReport check_zero_order(const ScalarField& u, const ConditionConfig& cfg);

/// Supporting half-plane check: u(x) >= u(y) must imply grad u(y).(x-y) >= 0
/// for every x in the radius window of y.
ViolationReport check_first_order(const ScalarField& u, const ConditionConfig& cfg);

/// |grad u| * max(0, Q2 + delta), gated exactly like the second-order loss.
ViolationReport check_second_order(const ScalarField& u, const ConditionConfig& cfg);

/// Fraction of foreground pixels in the discrete ball B_r around each
/// background pixel (0 at foreground pixels). Out-of-grid counts as background.
ScalarField half_disk_ratio(const BinaryMask& mask, double radius);

/// Ratio slack allowed by the discrete ball: boundary pixels of B_r / |B_r|.
double ball_ring_slack(double radius);

/// u_m - max_{i != m} u_i.
ScalarField margin_field(std::span<const ScalarField> logits, std::size_t m);

// True for pixels at least `border` away from every edge.
inline bool in_interior(std::size_t i, std::size_t j, std::size_t h, std::size_t w,
                        std::size_t border) {
  return i >= border && j >= border && i + border < h && j + border < w;
}

}  // namespace qconvex
