#include "gammaflow/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace gammaflow {

double cutoff_f(double r) {
  // exp(-1/r^2) underflows below |r| = 1/sqrt(700) ~ 0.0378.
  if (r >= 0.0 || std::abs(r) < 0.038) return 0.0;
  const double r2 = r * r;
  return -r2 * r2 * std::exp(-1.0 / r2);
}

double cutoff_f_tilde(double r) { return cutoff_f(r - 1.0); }

double c_alpha(double alpha) { return alpha * alpha - 1.0; }

namespace {

ScalarField field_like(const ShapeField& shape, int margin) {
  ScalarField f;
  f.dims = shape.dims;
  f.origin = shape.origin;
  f.spacing = shape.spacing;
  f.margin = margin;
  f.v.assign(shape.pts.size(), std::numeric_limits<double>::quiet_NaN());
  return f;
}

double auto_tol(const ShapeField& shape, double tol, double factor, double floor) {
  if (tol > 0.0) return tol;
  // the finest axis sets the achievable accuracy; coarse axes along which the
  // data is constant do not degrade it
  const double h = shape.spacing.minCoeff();
  return std::max(floor, factor * h * h);
}

}  // namespace

ResidualSummary translator_residual(const ShapeField& shape, const GammaField& gf) {
  ResidualSummary out;
  out.field = field_like(shape, shape.margin);
  double sum = 0.0;
  std::size_t count = 0;
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl] || !std::isfinite(gf.gamma.v[fl])) return;
    const double r = gf.gamma.v[fl] - 1.0 / shape.pts[fl].W;
    out.field.v[fl] = r;
    out.max_abs = std::max(out.max_abs, std::abs(r));
    sum += std::abs(r);
    ++count;
  });
  out.mean_abs = count ? sum / count : 0.0;
  return out;
}

ScalarField identity_check(const GraphPatch& patch, const ShapeField& shape,
                           const CurvatureSpec& spec, double tol) {
  const GammaField gf = gamma_field(shape, spec);
  const ResidualSummary res = translator_residual(shape, gf);
  const double gate = auto_tol(shape, tol, 100.0, 1e-10);
  if (res.max_abs > gate) {
    std::ostringstream os;
    os << "data is not a translator for " << spec.name() << ": max |gamma - <nu,e>| = "
       << res.max_abs << " exceeds " << gate;
    throw NotATranslator(os.str());
  }

  const ScalarField lap = gamma_laplacian(patch, shape, gf, gf.gamma);
  const ScalarField dh = directional_height_gradient(shape, gf.gamma);

  ScalarField out = field_like(shape, std::max(lap.margin, dh.margin));
  for_each_interior(shape.dims, out.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!std::isfinite(lap.v[fl]) || !std::isfinite(dh.v[fl]) ||
        !std::isfinite(gf.normA2_gamma.v[fl]) || !std::isfinite(gf.gamma.v[fl]))
      return;
    out.v[fl] = std::abs(lap.v[fl] + dh.v[fl] + gf.normA2_gamma.v[fl] * gf.gamma.v[fl]);
  });
  return out;
}

ConvexityScan convexity_scan(const ShapeField& shape, const std::vector<ConeSpec>& cones) {
  ConvexityScan scan;
  scan.min_lambda = std::numeric_limits<double>::infinity();
  scan.alpha_star_min = std::numeric_limits<double>::infinity();
  scan.cone_margins.assign(cones.size(), std::numeric_limits<double>::infinity());
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl]) return;
    const PointShape& p = shape.pts[fl];
    const double lmin = p.lambda.minCoeff();
    scan.min_lambda = std::min(scan.min_lambda, lmin);
    if (lmin < 0.0) ++scan.sigma_minus_cells;
    const double normA = std::sqrt(p.normA2);
    if (normA > 1e-300) {
      scan.alpha_star_min = std::min(scan.alpha_star_min, p.H / normA);
      scan.alpha_star_defined = true;
    }
    for (std::size_t c = 0; c < cones.size(); ++c)
      scan.cone_margins[c] =
          std::min(scan.cone_margins[c], cone_contains(cones[c], p.lambda).margin);
  });
  if (!std::isfinite(scan.min_lambda)) scan.min_lambda = 0.0;
  if (!scan.alpha_star_defined) scan.alpha_star_min = 0.0;
  return scan;
}

SxFields sx_fields(const ShapeField& shape, const GammaField& gf) {
  SxFields out;
  out.h_field = field_like(shape, shape.margin);
  out.j_field = out.h_field;
  out.g_field = out.h_field;
  out.gtilde_field = out.h_field;
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl] || !std::isfinite(gf.gamma.v[fl])) return;
    const PointShape& p = shape.pts[fl];
    const double gamma = gf.gamma.v[fl];
    const double lmin = p.lambda.minCoeff();
    const double lmax = p.lambda.maxCoeff();
    if (shape.n == 2 && lmax != 0.0) out.h_field.v[fl] = gamma / lmax;
    if (gamma > 0.0) {
      const double j = lmin / gamma;
      out.j_field.v[fl] = j;
      out.g_field.v[fl] = cutoff_f(j);
    }
    if (p.H - lmin > 0.0) out.gtilde_field.v[fl] = cutoff_f_tilde(gamma / (p.H - lmin));
  });
  return out;
}

AwRatio aw_ratio(const ShapeField& shape, const GammaField& gf) {
  AwRatio out;
  out.field = field_like(shape, shape.margin);
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl] || !std::isfinite(gf.gamma.v[fl])) return;
    const double gamma = gf.gamma.v[fl];
    if (gamma > 0.0) out.field.v[fl] = shape.pts[fl].normA2 / (gamma * gamma);
  });

  // Weak local maxima: value >= all 3^n - 1 neighbors, every neighbor valid.
  const int n = shape.n;
  for_each_interior(shape.dims, shape.margin + 1, [&](const std::vector<int>& idx, std::size_t fl) {
    const double v0 = out.field.v[fl];
    if (!std::isfinite(v0)) return;
    std::vector<int> off(n, -1);
    while (true) {
      bool center = true;
      for (int a = 0; a < n; ++a) center = center && off[a] == 0;
      if (!center) {
        std::size_t nb = fl;
        for (int a = 0; a < n; ++a) nb = fd::shift(nb, a, off[a], shape.dims);
        const double vn = out.field.v[nb];
        if (!std::isfinite(vn) || vn > v0) return;
      }
      int a = n - 1;
      for (; a >= 0; --a) {
        if (++off[a] <= 1) break;
        off[a] = -1;
      }
      if (a < 0) break;
    }
    out.local_max.push_back(idx);
  });
  return out;
}

ScalarField q_squared_field(const GraphPatch& patch, const ShapeField& shape,
                            const GammaField& gf) {
  patch.validate();
  const int n = shape.n;
  ScalarField out = field_like(shape, shape.margin + 1);
  if (patch.dims != shape.dims) throw DegenerateGrid("patch and shape grids differ");

  for_each_interior(shape.dims, out.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl] || gf.dgamma[fl].size() == 0) return;
    for (int a = 0; a < n; ++a) {
      const std::size_t p1 = fd::shift(fl, a, 1, shape.dims);
      const std::size_t m1 = fd::shift(fl, a, -1, shape.dims);
      if (!shape.ok[p1] || !shape.ok[m1] || !std::isfinite(gf.gamma.v[p1]) ||
          !std::isfinite(gf.gamma.v[m1]))
        return;
    }
    const PointShape& p = shape.pts[fl];
    const Vector& dg = gf.dgamma[fl];
    const double gamma = gf.gamma.v[fl];

    // Covariant nabla_k A_ij = d_k A_ij - Gamma^l_ki A_lj - Gamma^l_kj A_il.
    std::vector<Matrix> nablaA(n);
    Vector grad_gamma_c(n), grad_normA2_c(n);
    for (int k = 0; k < n; ++k) {
      const std::size_t p1 = fd::shift(fl, k, 1, shape.dims);
      const std::size_t m1 = fd::shift(fl, k, -1, shape.dims);
      const double inv2h = 1.0 / (2.0 * shape.spacing[k]);
      Matrix C = (shape.pts[p1].A - shape.pts[m1].A) * inv2h;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            C(i, j) -= shape.christoffel(p, l, k, i) * p.A(l, j) +
                       shape.christoffel(p, l, k, j) * p.A(i, l);
      nablaA[k] = std::move(C);
      grad_gamma_c[k] = (gf.gamma.v[p1] - gf.gamma.v[m1]) * inv2h;
      grad_normA2_c[k] = (shape.pts[p1].normA2 - shape.pts[m1].normA2) * inv2h;
    }

    // Everything in the principal frame; tensor slots contract with the
    // g-orthonormal basis.
    double normDA = 0.0, normDg = 0.0, cross = 0.0;
    for (int a = 0; a < n; ++a) {
      const Vector va = p.frame.col(a);
      Matrix Na = Matrix::Zero(n, n);
      for (int k = 0; k < n; ++k) Na += va[k] * nablaA[k];
      const Matrix Nt = p.frame.transpose() * Na * p.frame;
      const double dgamma_a = va.dot(grad_gamma_c);
      const double dnormA2_a = va.dot(grad_normA2_c);
      normDA += dg[a] * Nt.squaredNorm();
      normDg += dg[a] * dgamma_a * dgamma_a;
      cross += dg[a] * dnormA2_a * dgamma_a;
    }
    out.v[fl] = gamma * gamma * normDA + p.normA2 * normDg - gamma * cross;
  });
  return out;
}

std::vector<ScalarField> angle_fields(const ShapeField& shape) {
  std::vector<ScalarField> out;
  for (int i = 0; i < shape.n; ++i) out.push_back(field_like(shape, shape.margin));
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl]) return;
    for (int i = 0; i < shape.n; ++i) out[i].v[fl] = shape.pts[fl].nu[i];
  });
  return out;
}

DichotomyReport dichotomy_report(const GraphPatch& patch, const ShapeField& shape,
                                 const GammaField& gf, const CurvatureSpec& spec,
                                 DichotomyOptions opt) {
  const double h = shape.spacing.minCoeff();
  const double theta = opt.theta > 0.0 ? opt.theta : 10.0 * h * h;
  const double res_tol = auto_tol(shape, opt.residual_tol, 100.0, 1e-8);
  const double aw_tol = opt.aw_spread_tol > 0.0 ? opt.aw_spread_tol : 50.0 * h * h;
  const double q2_tol = opt.q2_tol > 0.0 ? opt.q2_tol : 100.0 * h * h;

  DichotomyReport rep;
  rep.theta = theta;

  const ResidualSummary res = translator_residual(shape, gf);
  rep.residual_max = res.max_abs;
  if (res.max_abs > res_tol) {
    std::ostringstream os;
    os << "data is not a translator for " << spec.name() << ": max residual "
       << res.max_abs << " exceeds " << res_tol;
    throw NotATranslator(os.str());
  }

  double min_lambda = std::numeric_limits<double>::infinity();
  bool single = true;
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl]) return;
    const Vector& lam = shape.pts[fl].lambda;
    min_lambda = std::min(min_lambda, lam.minCoeff());
    int big = 0;
    for (int a = 0; a < shape.n; ++a)
      if (std::abs(lam[a]) > theta) ++big;
    if (big != 1) single = false;
  });
  rep.min_lambda = std::isfinite(min_lambda) ? min_lambda : 0.0;
  rep.single_curvature = single;

  const AwRatio aw = aw_ratio(shape, gf);
  double aw_min = std::numeric_limits<double>::infinity(), aw_max = -aw_min;
  for (double v : aw.field.v)
    if (std::isfinite(v)) { aw_min = std::min(aw_min, v); aw_max = std::max(aw_max, v); }
  rep.aw_spread = (aw_max >= aw_min) ? aw_max - aw_min : 0.0;

  const ScalarField q2 = q_squared_field(patch, shape, gf);
  rep.q2_max = q2.max_abs();

  const auto angles = angle_fields(shape);
  double min_sup = 0.0;
  if (shape.n >= 2) {
    min_sup = std::numeric_limits<double>::infinity();
    for (const auto& a : angles) min_sup = std::min(min_sup, a.max_abs());
  }
  rep.min_vanishing_angle = min_sup;

  if (rep.min_lambda > theta) {
    rep.branch = DichotomyReport::Branch::StrictlyConvex;
    rep.branch_name = "strictly convex";
  } else if (single && rep.aw_spread < aw_tol && rep.q2_max < q2_tol) {
    rep.branch = DichotomyReport::Branch::GrimReaperLike;
    rep.branch_name = "grim-reaper-like";
  } else {
    rep.branch = DichotomyReport::Branch::Inconclusive;
    rep.branch_name = "inconclusive";
  }
  return rep;
}

}  // namespace gammaflow
