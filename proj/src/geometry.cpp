#include "gammaflow/geometry.hpp"

#include <cmath>
#include <sstream>

namespace gammaflow {

ShapeField shape_field(const GraphPatch& patch) {
  patch.validate();
  ShapeField sf;
  sf.n = patch.n;
  sf.dims = patch.dims;
  sf.origin = patch.origin;
  sf.spacing = patch.spacing;
  sf.margin = 2;
  sf.pts.resize(patch.size());
  sf.ok.assign(patch.size(), 0);

  const int n = patch.n;
  for_each_interior(patch.dims, sf.margin, [&](const std::vector<int>& idx, std::size_t fl) {
    PointShape p;
    p.du.resize(n);
    p.d2u.resize(n, n);
    for (int a = 0; a < n; ++a)
      p.du[a] = fd::d1(patch.u, fl, a, patch.spacing[a], patch.dims);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        p.d2u(a, b) = fd::d2(patch.u, fl, a, b, patch.spacing[a], patch.spacing[b], patch.dims);
        p.d2u(b, a) = p.d2u(a, b);
      }

    p.W = std::sqrt(1.0 + p.du.squaredNorm());
    p.nu.resize(n + 1);
    p.nu.head(n) = -p.du / p.W;
    p.nu[n] = 1.0 / p.W;

    p.g = Matrix::Identity(n, n) + p.du * p.du.transpose();
    p.g_inv = Matrix::Identity(n, n) - p.du * p.du.transpose() / (p.W * p.W);
    p.A = p.d2u / p.W;
    p.shape_op = p.g_inv * p.A;

    // A v = mu g v: the eigenvalues are those of the shape operator and the
    // eigenvectors are g-orthonormal, so the ambient tangents are orthonormal.
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(p.A, p.g);
    p.lambda = es.eigenvalues();
    p.frame = es.eigenvectors();

    p.H = p.lambda.sum();
    p.normA2 = p.lambda.squaredNorm();

    sf.pts[fl] = std::move(p);
    sf.ok[fl] = 1;
  });
  return sf;
}

GammaField gamma_field(const ShapeField& shape, const CurvatureSpec& spec) {
  if (spec.n != shape.n)
    throw DomainError("spec dimension does not match the shape field");
  GammaField gf;
  gf.spec = spec;
  gf.gamma.dims = shape.dims;
  gf.gamma.origin = shape.origin;
  gf.gamma.spacing = shape.spacing;
  gf.gamma.margin = shape.margin;
  gf.gamma.v.assign(shape.pts.size(), std::numeric_limits<double>::quiet_NaN());
  gf.normA2_gamma = gf.gamma;
  gf.dgamma.resize(shape.pts.size());

  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>& idx, std::size_t fl) {
    if (!shape.ok[fl]) return;
    const PointShape& p = shape.pts[fl];
    double gamma;
    try {
      gamma = eval_gamma(spec, p.lambda);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "lambda outside the cone closure at grid point (";
      for (std::size_t a = 0; a < idx.size(); ++a) os << (a ? "," : "") << idx[a];
      os << "): " << e.what();
      throw DomainError(os.str());
    }
    gf.gamma.v[fl] = gamma;
    Vector dg = grad_gamma_closure(spec, p.lambda);
    if (dg.size() != 0) {
      double na2g = 0.0;
      for (int a = 0; a < shape.n; ++a) na2g += dg[a] * p.lambda[a] * p.lambda[a];
      gf.normA2_gamma.v[fl] = na2g;
      gf.dgamma[fl] = std::move(dg);
    } else if (p.lambda.norm() < 1e-12) {
      gf.normA2_gamma.v[fl] = 0.0;  // flat points: |A|^2_gamma vanishes in the limit
    }
  });
  return gf;
}

MatrixField surface_hessian(const GraphPatch& patch, const ShapeField& shape,
                            const ScalarField& f) {
  patch.validate();
  const int n = patch.n;
  MatrixField out;
  out.dims = patch.dims;
  out.margin = std::max(f.margin + 1, shape.margin);
  out.m.resize(patch.size());
  out.d1.resize(patch.size());

  for_each_interior(patch.dims, out.margin, [&](const std::vector<int>& idx, std::size_t fl) {
    if (!shape.ok[fl]) return;
    for (int a = 0; a < n; ++a) {
      // the whole FD stencil of f must be valid
      if (!std::isfinite(f.v[fd::shift(fl, a, 1, patch.dims)]) ||
          !std::isfinite(f.v[fd::shift(fl, a, -1, patch.dims)]))
        return;
    }
    const PointShape& p = shape.pts[fl];
    Vector df(n);
    Matrix hess(n, n);
    for (int a = 0; a < n; ++a) df[a] = fd::d1(f.v, fl, a, patch.spacing[a], patch.dims);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double v = fd::d2(f.v, fl, a, b, patch.spacing[a], patch.spacing[b], patch.dims);
        for (int k = 0; k < n; ++k) v -= shape.christoffel(p, k, a, b) * df[k];
        hess(a, b) = v;
        hess(b, a) = v;
      }
    out.m[fl] = std::move(hess);
    out.d1[fl] = std::move(df);
  });
  return out;
}

ScalarField gamma_laplacian(const GraphPatch& patch, const ShapeField& shape,
                            const GammaField& gf, const ScalarField& f) {
  const MatrixField hess = surface_hessian(patch, shape, f);
  ScalarField out;
  out.dims = patch.dims;
  out.origin = patch.origin;
  out.spacing = patch.spacing;
  out.margin = hess.margin;
  out.v.assign(patch.size(), std::numeric_limits<double>::quiet_NaN());

  for_each_interior(patch.dims, out.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (hess.m[fl].size() == 0 || gf.dgamma[fl].size() == 0) return;
    const PointShape& p = shape.pts[fl];
    double acc = 0.0;
    for (int a = 0; a < patch.n; ++a) {
      const Vector va = p.frame.col(a);
      acc += gf.dgamma[fl][a] * va.dot(hess.m[fl] * va);
    }
    out.v[fl] = acc;
  });
  return out;
}

ScalarField directional_height_gradient(const ShapeField& shape, const ScalarField& f) {
  ScalarField out;
  out.dims = shape.dims;
  out.origin = shape.origin;
  out.spacing = shape.spacing;
  out.margin = std::max(f.margin + 1, shape.margin);
  out.v.assign(shape.pts.size(), std::numeric_limits<double>::quiet_NaN());

  for_each_interior(shape.dims, out.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl]) return;
    for (int a = 0; a < shape.n; ++a) {
      if (!std::isfinite(f.v[fd::shift(fl, a, 1, shape.dims)]) ||
          !std::isfinite(f.v[fd::shift(fl, a, -1, shape.dims)]))
        return;
    }
    const PointShape& p = shape.pts[fl];
    Vector df(shape.n);
    for (int a = 0; a < shape.n; ++a)
      df[a] = fd::d1(f.v, fl, a, shape.spacing[a], shape.dims);
    out.v[fl] = (p.g_inv * df).dot(p.du);
  });
  return out;
}

}  // namespace gammaflow
