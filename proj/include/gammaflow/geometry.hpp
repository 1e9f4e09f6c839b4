#pragma once

#include <optional>

#include "gammaflow/curvature.hpp"
#include "gammaflow/grid.hpp"

namespace gammaflow {

/// Extrinsic geometry of a graph at one grid point. Principal curvatures are
/// stored ascending; frame columns are the coordinate components of the
/// principal directions (g-orthonormal, so the ambient tangents they span are
/// Euclidean-orthonormal).
struct PointShape {
  Vector du;      // n, coordinate gradient of u
  Matrix d2u;     // n x n, coordinate Hessian of u
  double W = 1.0; // sqrt(1 + |Du|^2)
  Vector nu;      // n+1, upward unit normal (-Du, 1)/W
  Matrix g, g_inv;
  Matrix A;        // second fundamental form, d2u / W
  Matrix shape_op; // g_inv * A
  Vector lambda;   // ascending eigenvalues of shape_op
  Matrix frame;    // n x n, column a = coordinate components of tau_a
  double H = 0.0;
  double normA2 = 0.0;
};

/// Per-point shape data on the interior shrunk by 2 cells.
struct ShapeField {
  int n = 1;
  std::vector<int> dims;
  Vector origin, spacing;
  int margin = 2;
  std::vector<PointShape> pts;  // full-grid indexing
  std::vector<char> ok;         // 1 where pts is populated

  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < n; ++a) f = f * dims[a] + idx[a];
    return f;
  }

  /// Ambient tangent vector of principal direction a (unit length).
  Vector tau_ambient(const PointShape& p, int a) const {
    Vector t(n + 1);
    t.head(n) = p.frame.col(a);
    t[n] = p.du.dot(p.frame.col(a));
    return t;
  }

  /// Christoffel symbol of the graph metric, Gamma^k_ij = u_ij u_k / W^2.
  double christoffel(const PointShape& p, int k, int i, int j) const {
    return p.d2u(i, j) * p.du[k] / (p.W * p.W);
  }
};

ShapeField shape_field(const GraphPatch& patch);

/// gamma and its eigenvalue gradient evaluated pointwise on a shape field.
/// dgamma and normA2_gamma are present only where lambda is strictly inside
/// the cone (derivatives are refused on the boundary).
struct GammaField {
  ScalarField gamma;
  ScalarField normA2_gamma;           // sum_a dgamma_a lambda_a^2
  std::vector<Vector> dgamma;         // full-grid; zero-size where absent
  CurvatureSpec spec;
};

GammaField gamma_field(const ShapeField& shape, const CurvatureSpec& spec);

/// Coordinate covariant Hessians of a grid function f,
/// Hess_ij = d_i d_j f - Gamma^k_ij d_k f. Valid margin is one more than f's.
struct MatrixField {
  std::vector<int> dims;
  int margin = 0;
  std::vector<Matrix> m;   // full-grid; zero-size where absent
  std::vector<Vector> d1;  // coordinate gradient of f, same validity
};

MatrixField surface_hessian(const GraphPatch& patch, const ShapeField& shape,
                            const ScalarField& f);

/// Delta_gamma f = sum_a (dgamma/dlambda_a) Hess f(tau_a, tau_a) in the
/// principal frame.
ScalarField gamma_laplacian(const GraphPatch& patch, const ShapeField& shape,
                            const GammaField& gf, const ScalarField& f);

/// <surface gradient of f, tangential part of e_{n+1}> = g^{ij} d_j f d_i u.
ScalarField directional_height_gradient(const ShapeField& shape, const ScalarField& f);

}  // namespace gammaflow
