#pragma once

#include "gammaflow/geometry.hpp"

namespace gammaflow {

/// The auxiliary scalar f(r) = -r^4 exp(-1/r^2) for r < 0, 0 for r >= 0.
/// Exactly 0 for |r| < 0.038 where exp(-1/r^2) underflows double precision.
double cutoff_f(double r);

/// f~(r) = f(r - 1).
double cutoff_f_tilde(double r);

/// c(alpha) = alpha^2 - 1, the pinching ratio constant of the alpha cone.
double c_alpha(double alpha);

struct ResidualSummary {
  ScalarField field;  // gamma(lambda) - <nu, e_{n+1}>
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

/// Pointwise translator defect gamma(lambda) - <nu, e_{n+1}>.
ResidualSummary translator_residual(const ShapeField& shape, const GammaField& gf);

/// Residual of the translator identity
///   Delta_gamma gamma + grad_{n+1} gamma + |A|^2_gamma gamma = 0
/// evaluated by finite differences. Throws NotATranslator when the translator
/// defect exceeds `tol` first.
ScalarField identity_check(const GraphPatch& patch, const ShapeField& shape,
                           const CurvatureSpec& spec, double tol = 0.0);

struct ConvexityScan {
  double min_lambda = 0.0;
  long sigma_minus_cells = 0;        // cells with smallest lambda < 0
  double alpha_star_min = 0.0;       // min of H/|A| where |A| > 0
  bool alpha_star_defined = false;
  std::vector<double> cone_margins;  // min margins, parallel to the request
};

ConvexityScan convexity_scan(const ShapeField& shape,
                             const std::vector<ConeSpec>& cones = {});

/// The scalar indicators h = gamma/lambda_max (n = 2 only), j = lambda_min/gamma,
/// g = f(j) and g~ = f~(gamma/(H - lambda_min)); undefined points stay NaN.
struct SxFields {
  ScalarField h_field;  // NaN everywhere unless n == 2
  ScalarField j_field;
  ScalarField g_field;
  ScalarField gtilde_field;
};

SxFields sx_fields(const ShapeField& shape, const GammaField& gf);

struct AwRatio {
  ScalarField field;                        // |A|^2 / gamma^2
  std::vector<std::vector<int>> local_max;  // weak maxima vs all 3^n-1 neighbors
};

AwRatio aw_ratio(const ShapeField& shape, const GammaField& gf);

/// Q^2 = gamma^2 |grad A|^2_gamma + |A|^2 |grad gamma|^2_gamma
///       - gamma <grad |A|^2, grad gamma>_gamma, the nonnegative quantity whose
/// vanishing characterizes cylindrical translators. Covariant derivatives use
/// the graph Christoffel symbols; valid margin is 3 cells.
ScalarField q_squared_field(const GraphPatch& patch, const ShapeField& shape,
                            const GammaField& gf);

/// The n horizontal angle functions <nu, e_i>, i = 1..n.
std::vector<ScalarField> angle_fields(const ShapeField& shape);

struct DichotomyOptions {
  double theta = 0.0;         // convexity threshold; <= 0 means 10 h^2
  double residual_tol = 0.0;  // translator gate; <= 0 means max(1e-8, 100 h^2)
  double aw_spread_tol = 0.0; // <= 0 means 50 h^2
  double q2_tol = 0.0;        // <= 0 means 100 h^2
};

struct DichotomyReport {
  enum class Branch { StrictlyConvex, GrimReaperLike, Inconclusive } branch =
      Branch::Inconclusive;
  std::string branch_name;    // "strictly convex", "grim-reaper-like", "inconclusive"
  double residual_max = 0.0;
  double min_lambda = 0.0;
  double theta = 0.0;
  double aw_spread = 0.0;     // max - min of |A|^2/gamma^2
  double q2_max = 0.0;
  double min_vanishing_angle = 0.0;  // smallest sup-norm among the angle fields
  bool single_curvature = false;     // exactly one lambda above theta pointwise
};

/// Classifies translator data as strictly convex, grim-reaper-like, or
/// inconclusive. Throws NotATranslator when the residual gate fails.
DichotomyReport dichotomy_report(const GraphPatch& patch, const ShapeField& shape,
                                 const GammaField& gf, const CurvatureSpec& spec,
                                 DichotomyOptions opt = {});

}  // namespace gammaflow
