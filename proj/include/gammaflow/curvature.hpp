#pragma once

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gammaflow/errors.hpp"

namespace gammaflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Cones
// ---------------------------------------------------------------------------

enum class ConeKind {
  Positive,        // all lambda_i > 0
  Alpha,           // alpha*|A| <= H, |A| the Euclidean norm of lambda
  TwoConvexTilde,  // H > 0 and the two smallest eigenvalues sum > 0
  Garding,         // S_i(lambda) > 0 for i = 1..k
  MeanPositive,    // H > 0
};

struct ConeSpec {
  ConeKind kind = ConeKind::Positive;
  double alpha = 1.0;  // Alpha only
  int k = 1;           // Garding only

  static ConeSpec positive() { return {ConeKind::Positive}; }
  static ConeSpec alpha_cone(double a) { return {ConeKind::Alpha, a}; }
  static ConeSpec two_convex_tilde() { return {ConeKind::TwoConvexTilde}; }
  static ConeSpec garding(int k) { return {ConeKind::Garding, 1.0, k}; }
  static ConeSpec mean_positive() { return {ConeKind::MeanPositive}; }
};

struct ConeCheck {
  bool inside = false;
  double margin = 0.0;  // signed slack of the defining inequalities, |lambda|-normalized
};

/// Total function: never throws, margin is 0 on the cone boundary and
/// positive strictly inside. Multi-inequality cones report the minimum slack.
ConeCheck cone_contains(const ConeSpec& cone, const Vector& lambda);

/// Elementary symmetric polynomial S_k(lambda); S_0 = 1, S_k = 0 for k > n.
double elementary_symmetric(const Vector& lambda, int k);

// ---------------------------------------------------------------------------
// Curvature functions
// ---------------------------------------------------------------------------

enum class GammaKind { Mean, SigmaKRoot, GaussRoot, PowerMean, ConvexCombo };

/// A catalog entry: gamma, its natural cone, dimension and parameters.
/// The catalog is closed: Mean, S_k^{1/k}, K^{1/n}, p-means, and convex
/// combinations t*H + (1-t)*gamma_inner.
struct CurvatureSpec {
  GammaKind kind = GammaKind::Mean;
  int n = 2;
  int k = 1;       // SigmaKRoot
  double p = 1.0;  // PowerMean, p >= 1
  double t = 1.0;  // ConvexCombo weight on H, t in (0,1]
  std::shared_ptr<const CurvatureSpec> inner;  // ConvexCombo

  ConeSpec cone() const;
  std::string name() const;

  static CurvatureSpec mean(int n);
  static CurvatureSpec sigma_k_root(int k, int n);
  static CurvatureSpec gauss_root(int n);
  static CurvatureSpec power_mean(double p, int n);
  static CurvatureSpec convex_combo(double t, CurvatureSpec inner);

  /// Parses {"kind": "...", "n": int, "k": int?, "p": num?, "t": num?, "inner": {...}}.
  static CurvatureSpec from_json_text(const std::string& text);
  /// Shorthand names accepted by the CLI ("mean", "sigma2", "gauss", "pmean2", ...),
  /// falling back to JSON when the string starts with '{'.
  static CurvatureSpec parse(const std::string& text, int n);
};

/// gamma(lambda) on the closure of the cone; returns the continuous boundary
/// extension (0 for kinds satisfying property (d)). Throws DomainError outside
/// the closure.
double eval_gamma(const CurvatureSpec& spec, const Vector& lambda);

/// Is lambda strictly inside the cone (margin above tol)?
bool in_cone_interior(const CurvatureSpec& spec, const Vector& lambda, double tol = 0.0);

/// d gamma / d lambda_i, strictly inside the cone. All components positive.
Vector grad_gamma(const CurvatureSpec& spec, const Vector& lambda);

/// grad_gamma extended to boundary points where the gradient has a continuous
/// limit (p-means and combos at gamma > 0, Mean everywhere). Returns an empty
/// vector where no continuous extension exists.
Vector grad_gamma_closure(const CurvatureSpec& spec, const Vector& lambda);

/// Full analytic Hessian of gamma at an interior point.
Matrix hess_gamma(const CurvatureSpec& spec, const Vector& lambda);

/// <Hess(gamma)(lambda) xi, xi>. Vanishes for xi parallel to lambda.
double hess_quadform_eig(const CurvatureSpec& spec, const Vector& lambda, const Vector& xi);

/// |gamma(lambda) - <grad gamma, lambda>|, the 1-homogeneity Euler defect.
double euler_residual(const CurvatureSpec& spec, const Vector& lambda);

// ---------------------------------------------------------------------------
// Matrix-level calculus
// ---------------------------------------------------------------------------

/// A symmetric matrix together with its spectral decomposition,
/// matrix = eigenframe * diag(eigenvalues) * eigenframe^T.
struct SpectralPoint {
  Matrix matrix;
  Vector eigenvalues;
  Matrix eigenframe;

  static SpectralPoint decompose(const Matrix& symmetric);
};

/// First derivative of gamma on Sym(n): eigenframe * diag(grad) * eigenframe^T.
Matrix matrix_grad(const CurvatureSpec& spec, const SpectralPoint& A);

/// Second derivative quadratic form of gamma on Sym(n) applied to T:
///   sum_ab Hess_ab T~_aa T~_bb + 2 sum_{a<b} dd(a,b) |T~_ab|^2
/// with T~ = Q^T T Q and dd the divided difference of the gradient, replaced
/// by its second-derivative limit for nearly equal eigenvalue pairs.
double matrix_hess_quadform(const CurvatureSpec& spec, const SpectralPoint& A, const Matrix& T);

// ---------------------------------------------------------------------------
// Sampled classification
// ---------------------------------------------------------------------------

struct PropertyEvidence {
  bool holds = false;
  double margin = 0.0;  // worst-case evidence margin over the samples
};

/// Evidence-based flags, decided by randomized sampling inside the cone.
/// Sampled, not proved.
struct Classification {
  PropertyEvidence symmetric, homogeneous, monotone, normalized;
  PropertyEvidence convex, concave, off_radial_strict;
  int samples = 0;
};

Classification classify(const CurvatureSpec& spec, int sample_count = 1000,
                        unsigned seed = 2024);

/// Draws a point strictly inside the cone of `spec` (used by tests and classify).
Vector sample_cone_point(const CurvatureSpec& spec, std::mt19937& rng);

}  // namespace gammaflow
