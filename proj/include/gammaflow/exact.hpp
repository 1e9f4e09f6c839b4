#pragma once

#include "gammaflow/geometry.hpp"

namespace gammaflow {

/// Grim Reaper cylinder over a slab of width omega >= pi, tilted along the
/// last horizontal axis by a = sqrt((omega/pi)^2 - 1):
///   u(x) = -(omega/pi)^2 ln(sin((pi/omega) x_1)) + a x_n + h0,  x_1 in (0, omega).
struct GrimSpec {
  double omega = M_PI;
  int n = 1;
  double height_offset = 0.0;

  double tilt() const {
    const double r = omega / M_PI;
    return std::sqrt(std::max(r * r - 1.0, 0.0));
  }
  void validate() const {
    if (!(omega >= M_PI - 1e-12)) throw DomainError("Grim Reaper needs omega >= pi");
    if (n < 1) throw DomainError("Grim Reaper needs n >= 1");
  }
};

double grim_height(const GrimSpec& spec, const Vector& x);

/// Analytic shape sample: exactly one nonzero principal curvature
/// (pi/omega) sin((pi/omega) x_1), and <nu, e_{n+1}> equal to it.
PointShape grim_shape(const GrimSpec& spec, const Vector& x);

/// Discretized sub-patch strictly inside the slab (margin >= 0.05*omega on
/// the x_1 axis, away from the logarithmic blow-up), Exact boundary policy.
GraphPatch grim_patch(const GrimSpec& spec, const Vector& lo, const Vector& hi,
                      const std::vector<int>& dims);

/// Constant-height plane as a patch (the omega -> infinity analog).
GraphPatch flat_patch(int n, const Vector& lo, const Vector& hi,
                      const std::vector<int>& dims, double height = 0.0);

/// Shared helper: all pointwise shape data from (Du, D^2 u).
PointShape shape_from_derivatives(const Vector& du, const Matrix& d2u);

}  // namespace gammaflow
