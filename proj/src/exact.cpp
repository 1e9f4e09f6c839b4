#include "gammaflow/exact.hpp"

#include <cmath>

namespace gammaflow {

PointShape shape_from_derivatives(const Vector& du, const Matrix& d2u) {
  const int n = static_cast<int>(du.size());
  PointShape p;
  p.du = du;
  p.d2u = d2u;
  p.W = std::sqrt(1.0 + du.squaredNorm());
  p.nu.resize(n + 1);
  p.nu.head(n) = -du / p.W;
  p.nu[n] = 1.0 / p.W;
  p.g = Matrix::Identity(n, n) + du * du.transpose();
  p.g_inv = Matrix::Identity(n, n) - du * du.transpose() / (p.W * p.W);
  p.A = d2u / p.W;
  p.shape_op = p.g_inv * p.A;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(p.A, p.g);
  p.lambda = es.eigenvalues();
  p.frame = es.eigenvectors();
  p.H = p.lambda.sum();
  p.normA2 = p.lambda.squaredNorm();
  return p;
}

namespace {

void require_in_slab(const GrimSpec& spec, double x1) {
  if (!(x1 > 0.0 && x1 < spec.omega))
    throw DomainError("x_1 outside the slab (0, omega)");
}

}  // namespace

double grim_height(const GrimSpec& spec, const Vector& x) {
  spec.validate();
  if (x.size() != spec.n) throw DomainError("point dimension mismatch");
  require_in_slab(spec, x[0]);
  const double r = spec.omega / M_PI;
  const double k = M_PI / spec.omega;
  return -r * r * std::log(std::sin(k * x[0])) + spec.tilt() * x[spec.n - 1] +
         spec.height_offset;
}

PointShape grim_shape(const GrimSpec& spec, const Vector& x) {
  spec.validate();
  if (x.size() != spec.n) throw DomainError("point dimension mismatch");
  require_in_slab(spec, x[0]);
  const int n = spec.n;
  const double r = spec.omega / M_PI;
  const double k = M_PI / spec.omega;
  Vector du = Vector::Zero(n);
  Matrix d2u = Matrix::Zero(n, n);
  du[0] = -r * std::cos(k * x[0]) / std::sin(k * x[0]);
  du[n - 1] += spec.tilt();
  const double s = std::sin(k * x[0]);
  d2u(0, 0) = 1.0 / (s * s);
  return shape_from_derivatives(du, d2u);
}

GraphPatch grim_patch(const GrimSpec& spec, const Vector& lo, const Vector& hi,
                      const std::vector<int>& dims) {
  spec.validate();
  const double margin = 0.05 * spec.omega;
  if (!(lo[0] >= margin && hi[0] <= spec.omega - margin))
    throw DomainError("grim patch must keep a 0.05*omega margin from the slab walls");
  GrimSpec s = spec;
  return make_patch(spec.n, lo, hi, dims,
                    [s](const Vector& x) { return grim_height(s, x); },
                    BoundaryPolicy::Exact);
}

GraphPatch flat_patch(int n, const Vector& lo, const Vector& hi,
                      const std::vector<int>& dims, double height) {
  return make_patch(n, lo, hi, dims, [height](const Vector&) { return height; },
                    BoundaryPolicy::Exact);
}

}  // namespace gammaflow
