#pragma once

#include <optional>

#include "gammaflow/curvature.hpp"
#include "gammaflow/grid.hpp"

namespace gammaflow {

enum class ProfileKind { GrimProfile, BowlProfile };

/// A 1D translator profile with curvature data along it. Grim profiles are
/// centered at the tip (abscissa symmetric about 0); bowl profiles start at
/// the tip r = 0.
struct ProfileSolution {
  ProfileKind kind = ProfileKind::GrimProfile;
  std::vector<double> abscissa;    // strictly increasing
  std::vector<double> u, du, ddu;
  std::vector<double> lambda_rad;  // the profile-direction principal curvature
  std::vector<double> lambda_tan;  // rotational direction(s); 0 for grim
  double step = 0.0;
  double tilt = 0.0;               // grim parameter a
  double tip_curvature = 0.0;      // bowl: c = 1/gamma(1,...,1)
  std::optional<CurvatureSpec> spec;
  long rhs_evaluations = 0;

  std::size_t size() const { return abscissa.size(); }
};

/// Integrates (1+a^2) u'' = 1 + a^2 + (u')^2, u(0) = h0, u'(0) = 0 by classic
/// fourth-order Runge-Kutta with fixed step; halts before |u'| exceeds 1e6.
/// Local error is monitored by step halving.
ProfileSolution solve_grim_ivp(double a, double h0, double step);

/// Shoots the rotationally symmetric bowl profile for gamma:
///   gamma(lambda_rad, lambda_tan, ..., lambda_tan) = 1/sqrt(1+(u')^2),
/// lambda_rad = u''/(1+u'^2)^{3/2}, lambda_tan = u'/(r sqrt(1+u'^2)).
/// u'' is recovered at every stage by a bracketed root solve; the first step
/// uses the series u ~ c r^2/2 with c = 1/gamma(1,...,1).
ProfileSolution shoot_bowl(const CurvatureSpec& spec, int n, double r_max, double step);

/// Cylindrical (grim) or rotational (bowl) extension of a profile to a graph
/// patch, interpolating (u, du) by cubic Hermite pieces.
GraphPatch profile_to_patch(const ProfileSolution& sol, int n, const Vector& lo,
                            const Vector& hi, const std::vector<int>& dims);

/// Hermite evaluation of the profile height at |x| inside the solved range.
double profile_height(const ProfileSolution& sol, double x);

}  // namespace gammaflow
