#include <doctest.h>

#include <cmath>

#include "gammaflow/diagnostics.hpp"
#include "gammaflow/exact.hpp"
#include "gammaflow/profiles.hpp"

using namespace gammaflow;

namespace {

GraphPatch grim_cylinder(int res, double omega = M_PI, int res_y = 9) {
  GrimSpec gs{omega, 2};
  Vector lo(2), hi(2);
  lo << 0.05 * omega, -1.0;
  hi << 0.95 * omega, 1.0;
  return grim_patch(gs, lo, hi, {res, res_y});
}

GraphPatch saddle_patch() {
  const Vector lo = Vector::Constant(2, -1.0), hi = Vector::Constant(2, 1.0);
  return make_patch(2, lo, hi, {31, 31}, [](const Vector& x) {
    return 0.5 * (x[0] * x[0] - x[1] * x[1]);
  });
}

// mixed-sign principal curvatures with H > 0 everywhere, so mean-type gamma
// fields exist but the data is far from any translator
GraphPatch mixed_saddle() {
  const Vector lo = Vector::Constant(2, -1.0), hi = Vector::Constant(2, 1.0);
  return make_patch(2, lo, hi, {31, 31}, [](const Vector& x) {
    return 0.5 * (x[0] * x[0] - 0.4 * x[1] * x[1]);
  });
}

GraphPatch bowl_patch(int res = 81, double extent = 4.0) {
  static const ProfileSolution sol = shoot_bowl(CurvatureSpec::mean(2), 2, 8.0, 0.005);
  const Vector lo = Vector::Constant(2, -extent), hi = Vector::Constant(2, extent);
  return profile_to_patch(sol, 2, lo, hi, {res, res});
}

}  // namespace

TEST_CASE("cutoff function values and shape") {
  CHECK(cutoff_f(-1.0) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-14));
  CHECK(cutoff_f(0.0) == 0.0);
  CHECK(cutoff_f(0.5) == 0.0);
  CHECK(cutoff_f(-0.01) == 0.0);  // underflow cutoff
  CHECK(cutoff_f(-2.0) < 0.0);
  // f' > 0 and f'' < 0 on sampled r in [-2, -0.1]
  const double h = 1e-5;
  for (double r = -2.0; r <= -0.1; r += 0.05) {
    const double d1 = (cutoff_f(r + h) - cutoff_f(r - h)) / (2.0 * h);
    const double d2 = (cutoff_f(r + h) - 2.0 * cutoff_f(r) + cutoff_f(r - h)) / (h * h);
    CHECK(d1 > 0.0);
    CHECK(d2 < 0.0);
  }
  CHECK(cutoff_f_tilde(0.0) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-14));
  CHECK(c_alpha(0.5) == doctest::Approx(-0.75));
}

TEST_CASE("translator residual on canonical data") {
  // grim reaper: O(h^2) small
  {
    const GraphPatch p = grim_cylinder(101);
    const ShapeField sf = shape_field(p);
    const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
    const ResidualSummary res = translator_residual(sf, gf);
    CHECK(res.max_abs < 5e-3);
    CHECK(res.mean_abs < res.max_abs);
  }
  // paraboloid at the origin: gamma = 2 against <nu, e_3> = 1
  {
    const Vector lo = Vector::Constant(2, -1.0), hi = Vector::Constant(2, 1.0);
    const GraphPatch p = make_patch(2, lo, hi, {41, 41},
                                    [](const Vector& x) { return 0.5 * x.squaredNorm(); });
    const ShapeField sf = shape_field(p);
    const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
    const ResidualSummary res = translator_residual(sf, gf);
    CHECK(res.field.v[p.flat({20, 20})] == doctest::Approx(1.0).epsilon(1e-6));
  }
  // horizontal plane: gamma = 0 against <nu, e_3> = 1
  {
    const Vector lo = Vector::Constant(2, 0.0), hi = Vector::Constant(2, 1.0);
    const GraphPatch p = flat_patch(2, lo, hi, {11, 11});
    const ShapeField sf = shape_field(p);
    const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
    const ResidualSummary res = translator_residual(sf, gf);
    CHECK(res.field.v[p.flat({5, 5})] == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("identity residual converges on the exact grim reaper") {
  double prev = 0.0;
  for (int res : {91, 181, 361}) {
    GrimSpec gs{M_PI, 1};
    const Vector lo = Vector::Constant(1, 0.05 * M_PI);
    const Vector hi = Vector::Constant(1, 0.95 * M_PI);
    const GraphPatch p = grim_patch(gs, lo, hi, {res});
    const ShapeField sf = shape_field(p);
    const ScalarField id = identity_check(p, sf, CurvatureSpec::mean(1));
    const double err = id.max_abs();
    if (prev > 0.0) {
      const double order = std::log2(prev / err);
      CHECK(order > 1.7);
      CHECK(order < 2.3);
    }
    prev = err;
  }
}

TEST_CASE("identity check refuses non-translators") {
  const GraphPatch p = mixed_saddle();
  const ShapeField sf = shape_field(p);
  CHECK_THROWS_AS(identity_check(p, sf, CurvatureSpec::mean(2)), NotATranslator);
}

TEST_CASE("gamma field reports closure violations with the grid point") {
  const GraphPatch p = saddle_patch();  // H < 0 on half the grid
  const ShapeField sf = shape_field(p);
  CHECK_THROWS_AS(gamma_field(sf, CurvatureSpec::mean(2)), DomainError);
}

TEST_CASE("convexity scan on canonical surfaces") {
  {
    const GraphPatch p = grim_cylinder(81);
    const ConvexityScan scan = convexity_scan(shape_field(p), {ConeSpec::positive()});
    CHECK(scan.sigma_minus_cells == 0);
    CHECK(std::abs(scan.min_lambda) < 1e-8);
    CHECK(scan.alpha_star_defined);
    CHECK(scan.alpha_star_min == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(scan.cone_margins[0]) < 1e-8);
  }
  {
    const ConvexityScan scan = convexity_scan(shape_field(saddle_patch()));
    CHECK(scan.sigma_minus_cells > 0);
    CHECK(scan.min_lambda == doctest::Approx(-1.0).epsilon(1e-4));
  }
  {
    const ConvexityScan scan = convexity_scan(shape_field(bowl_patch()));
    CHECK(scan.sigma_minus_cells == 0);
    CHECK(scan.min_lambda > 0.0);
  }
}

TEST_CASE("scalar indicator fields") {
  const GraphPatch p = grim_cylinder(81);
  const ShapeField sf = shape_field(p);
  const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
  const SxFields sx = sx_fields(sf, gf);
  const std::size_t c = p.flat({40, 4});
  CHECK(std::abs(sx.j_field.v[c]) < 1e-10);       // lambda_min = 0 on the cylinder
  CHECK(sx.g_field.v[c] == 0.0);                  // f(0) = 0
  CHECK(sx.h_field.v[c] == doctest::Approx(1.0).epsilon(1e-8));  // gamma = lambda_max

  // mixed-sign curvature: h uses the largest, j the smallest eigenvalue
  const GraphPatch s = mixed_saddle();
  const ShapeField ssf = shape_field(s);
  const GammaField sgf = gamma_field(ssf, CurvatureSpec::mean(2));
  const SxFields ssx = sx_fields(ssf, sgf);
  const std::size_t sc = s.flat({15, 18});  // off-center, H != 0
  const PointShape& pt = ssf.pts[sc];
  if (sgf.gamma.v[sc] > 0.0) {
    CHECK(ssx.j_field.v[sc] ==
          doctest::Approx(pt.lambda.minCoeff() / sgf.gamma.v[sc]).epsilon(1e-12));
    CHECK(ssx.h_field.v[sc] ==
          doctest::Approx(sgf.gamma.v[sc] / pt.lambda.maxCoeff()).epsilon(1e-12));
  }
  const double gt = ssx.gtilde_field.v[sc];
  CHECK(std::isfinite(gt));
  CHECK(gt <= 0.0);
}

TEST_CASE("aw ratio field and plateau maxima") {
  const GraphPatch p = grim_cylinder(81);
  const ShapeField sf = shape_field(p);
  const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
  const AwRatio aw = aw_ratio(sf, gf);
  const double h = p.spacing.maxCoeff();
  for (double v : aw.field.v)
    if (std::isfinite(v)) CHECK(std::abs(v - 1.0) < 10.0 * h * h);
  CHECK(aw.local_max.size() > 100);  // the constant field is a plateau of maxima

  const Vector lo = Vector::Constant(2, -1.0), hi = Vector::Constant(2, 1.0);
  const GraphPatch q = make_patch(2, lo, hi, {41, 41},
                                  [](const Vector& x) { return 0.5 * x.squaredNorm(); });
  const ShapeField qsf = shape_field(q);
  const AwRatio qaw = aw_ratio(qsf, gamma_field(qsf, CurvatureSpec::mean(2)));
  CHECK(qaw.field.v[q.flat({20, 20})] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("q squared vanishes on cylinders and not on the bowl") {
  double prev = 0.0;
  for (int res : {41, 81}) {
    const GraphPatch p = grim_cylinder(res);
    const ShapeField sf = shape_field(p);
    const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
    const ScalarField q2 = q_squared_field(p, sf, gf);
    const double h = p.spacing[0];
    double min_v = 0.0, max_v = 0.0;
    for (double v : q2.v)
      if (std::isfinite(v)) {
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
      }
    CHECK(min_v >= -100.0 * h * h);
    if (prev > 0.0) CHECK(max_v < 0.5 * prev);  // decays under refinement
    prev = max_v;
  }

  const GraphPatch b = bowl_patch();
  const ShapeField bsf = shape_field(b);
  const GammaField bgf = gamma_field(bsf, CurvatureSpec::mean(2));
  const ScalarField bq2 = q_squared_field(b, bsf, bgf);
  // strictly positive away from the tip
  double annulus_min = std::numeric_limits<double>::infinity();
  for_each_interior(b.dims, bq2.margin, [&](const std::vector<int>& idx, std::size_t fl) {
    if (!std::isfinite(bq2.v[fl])) return;
    const Vector x = b.coord(idx);
    if (x.norm() < 1.0 || x.norm() > 3.0) return;
    annulus_min = std::min(annulus_min, bq2.v[fl]);
  });
  CHECK(annulus_min > 1e-5);
}

TEST_CASE("flat data has zero q squared") {
  const Vector lo = Vector::Constant(2, 0.0), hi = Vector::Constant(2, 1.0);
  const GraphPatch p = flat_patch(2, lo, hi, {15, 15});
  const ShapeField sf = shape_field(p);
  const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
  const ScalarField q2 = q_squared_field(p, sf, gf);
  for (double v : q2.v)
    if (std::isfinite(v)) CHECK(std::abs(v) < 1e-20);
}

TEST_CASE("angle fields") {
  const GraphPatch p = grim_cylinder(61);  // untilted: both horizontal angles vary only via x1
  const ShapeField sf = shape_field(p);
  const auto angles = angle_fields(sf);
  REQUIRE(angles.size() == 2);
  CHECK(angles[1].max_abs() < 1e-10);  // cylinder direction
  CHECK(angles[0].max_abs() > 0.1);

  GrimSpec tilted{std::sqrt(2.0) * M_PI, 2};
  Vector lo(2), hi(2);
  lo << 0.1 * tilted.omega, -1.0;
  hi << 0.9 * tilted.omega, 1.0;
  const auto tangles = angle_fields(shape_field(grim_patch(tilted, lo, hi, {61, 9})));
  CHECK(tangles[1].max_abs() > 0.1);  // the tilt direction picks up a component
}

TEST_CASE("dichotomy verdicts") {
  {
    const GraphPatch p = grim_cylinder(101);
    const ShapeField sf = shape_field(p);
    const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
    const DichotomyReport rep = dichotomy_report(p, sf, gf, CurvatureSpec::mean(2));
    CHECK(rep.branch == DichotomyReport::Branch::GrimReaperLike);
    CHECK(rep.branch_name == "grim-reaper-like");
    CHECK(rep.single_curvature);
  }
  {
    const GraphPatch b = bowl_patch(121, 2.0);  // radial curvature clears theta here
    const ShapeField sf = shape_field(b);
    const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
    const DichotomyReport rep = dichotomy_report(b, sf, gf, CurvatureSpec::mean(2));
    CHECK(rep.branch == DichotomyReport::Branch::StrictlyConvex);
    CHECK(rep.min_lambda > rep.theta);
  }
  {
    const GraphPatch s = mixed_saddle();
    const ShapeField sf = shape_field(s);
    const GammaField gf = gamma_field(sf, CurvatureSpec::mean(2));
    CHECK_THROWS_AS(dichotomy_report(s, sf, gf, CurvatureSpec::mean(2)), NotATranslator);
  }
}
