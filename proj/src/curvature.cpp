#include "gammaflow/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

namespace gammaflow {

namespace {

constexpr double kClosureTol = 1e-12;
constexpr double kEigenGapTol = 1e-7;

std::string vec_str(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

double elementary_symmetric(const Vector& lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  if (k == 0) return 1.0;
  if (k > n || k < 0) return 0.0;
  // Coefficients of prod (1 + lambda_i x), degree-k truncation.
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  return e[k];
}

namespace {

// S_m of lambda with the listed indices removed.
double esym_excluding(const Vector& lambda, int m, std::initializer_list<int> skip) {
  const int n = static_cast<int>(lambda.size());
  if (m == 0) return 1.0;
  if (m < 0) return 0.0;
  std::vector<double> e(static_cast<size_t>(m) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
    for (int j = m; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  }
  return e[m];
}

double sum_two_smallest(const Vector& lambda) {
  double m1 = std::numeric_limits<double>::infinity(), m2 = m1;
  for (int i = 0; i < lambda.size(); ++i) {
    const double v = lambda[i];
    if (v < m1) { m2 = m1; m1 = v; }
    else if (v < m2) m2 = v;
  }
  return lambda.size() >= 2 ? m1 + m2 : m1;
}

}  // namespace

ConeCheck cone_contains(const ConeSpec& cone, const Vector& lambda) {
  const double norm = lambda.norm();
  if (norm == 0.0) return {false, 0.0};
  double margin = 0.0;
  switch (cone.kind) {
    case ConeKind::Positive:
      margin = lambda.minCoeff() / norm;
      break;
    case ConeKind::Alpha:
      margin = lambda.sum() / norm - cone.alpha;
      break;
    case ConeKind::TwoConvexTilde:
      margin = std::min(lambda.sum(), sum_two_smallest(lambda)) / norm;
      break;
    case ConeKind::Garding: {
      margin = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= cone.k; ++i) {
        // S_i is i-homogeneous; normalize its slack accordingly.
        margin = std::min(margin, elementary_symmetric(lambda, i) / std::pow(norm, i));
      }
      break;
    }
    case ConeKind::MeanPositive:
      margin = lambda.sum() / norm;
      break;
  }
  return {margin > 0.0, margin};
}

// ---------------------------------------------------------------------------
// CurvatureSpec constructors and cone
// ---------------------------------------------------------------------------

CurvatureSpec CurvatureSpec::mean(int n) { return {GammaKind::Mean, n}; }

CurvatureSpec CurvatureSpec::sigma_k_root(int k, int n) {
  if (k < 1 || k > n) throw std::invalid_argument("SigmaKRoot requires 1 <= k <= n");
  CurvatureSpec s{GammaKind::SigmaKRoot, n};
  s.k = k;
  return s;
}

CurvatureSpec CurvatureSpec::gauss_root(int n) { return {GammaKind::GaussRoot, n}; }

CurvatureSpec CurvatureSpec::power_mean(double p, int n) {
  if (p < 1.0) throw std::invalid_argument("PowerMean requires p >= 1");
  CurvatureSpec s{GammaKind::PowerMean, n};
  s.p = p;
  return s;
}

CurvatureSpec CurvatureSpec::convex_combo(double t, CurvatureSpec inner) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("ConvexCombo requires t in (0,1]");
  CurvatureSpec s{GammaKind::ConvexCombo, inner.n};
  s.t = t;
  s.inner = std::make_shared<const CurvatureSpec>(std::move(inner));
  return s;
}

ConeSpec CurvatureSpec::cone() const {
  switch (kind) {
    case GammaKind::Mean: return ConeSpec::mean_positive();
    case GammaKind::SigmaKRoot: return ConeSpec::garding(k);
    case GammaKind::GaussRoot:
    case GammaKind::PowerMean: return ConeSpec::positive();
    case GammaKind::ConvexCombo: return inner->cone();
  }
  return ConeSpec::positive();
}

std::string CurvatureSpec::name() const {
  std::ostringstream os;
  switch (kind) {
    case GammaKind::Mean: os << "Mean"; break;
    case GammaKind::SigmaKRoot: os << "SigmaKRoot(k=" << k << ")"; break;
    case GammaKind::GaussRoot: os << "GaussRoot"; break;
    case GammaKind::PowerMean: os << "PowerMean(p=" << p << ")"; break;
    case GammaKind::ConvexCombo:
      os << "ConvexCombo(t=" << t << ", " << inner->name() << ")";
      break;
  }
  os << "[n=" << n << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

void require_closure(const CurvatureSpec& spec, const Vector& lambda) {
  if (lambda.size() != spec.n)
    throw DomainError("lambda has wrong dimension for spec " + spec.name());
  const ConeCheck c = cone_contains(spec.cone(), lambda);
  if (c.margin < -kClosureTol)
    throw DomainError("lambda " + vec_str(lambda) + " outside closure of cone for " +
                      spec.name() + " (margin " + std::to_string(c.margin) + ")");
}

void require_interior(const CurvatureSpec& spec, const Vector& lambda) {
  if (lambda.size() != spec.n)
    throw DomainError("lambda has wrong dimension for spec " + spec.name());
  const ConeCheck c = cone_contains(spec.cone(), lambda);
  if (!(c.margin > kClosureTol))
    throw DomainError("derivatives need lambda strictly inside the cone; " +
                      vec_str(lambda) + " has margin " + std::to_string(c.margin) +
                      " for " + spec.name());
}

}  // namespace

bool in_cone_interior(const CurvatureSpec& spec, const Vector& lambda, double tol) {
  const ConeCheck c = cone_contains(spec.cone(), lambda);
  return c.margin > tol;
}

double eval_gamma(const CurvatureSpec& spec, const Vector& lambda) {
  require_closure(spec, lambda);
  switch (spec.kind) {
    case GammaKind::Mean:
      return std::max(lambda.sum(), 0.0);
    case GammaKind::SigmaKRoot: {
      const double s = elementary_symmetric(lambda, spec.k);
      return s <= 0.0 ? 0.0 : std::pow(s, 1.0 / spec.k);
    }
    case GammaKind::GaussRoot: {
      if (lambda.minCoeff() <= 0.0) return 0.0;
      double logsum = 0.0;
      for (int i = 0; i < spec.n; ++i) logsum += std::log(lambda[i]);
      return std::exp(logsum / spec.n);
    }
    case GammaKind::PowerMean: {
      // Continuous (nonzero) extension to the boundary of the positive cone.
      double m = 0.0;
      for (int i = 0; i < spec.n; ++i) m += std::pow(std::max(lambda[i], 0.0), spec.p);
      return std::pow(m, 1.0 / spec.p);
    }
    case GammaKind::ConvexCombo:
      return spec.t * lambda.sum() + (1.0 - spec.t) * eval_gamma(*spec.inner, lambda);
  }
  return 0.0;
}

Vector grad_gamma(const CurvatureSpec& spec, const Vector& lambda) {
  require_interior(spec, lambda);
  const int n = spec.n;
  Vector g(n);
  switch (spec.kind) {
    case GammaKind::Mean:
      g.setOnes();
      break;
    case GammaKind::SigmaKRoot: {
      const int k = spec.k;
      const double s = elementary_symmetric(lambda, k);
      const double pre = (1.0 / k) * std::pow(s, 1.0 / k - 1.0);
      for (int i = 0; i < n; ++i) g[i] = pre * esym_excluding(lambda, k - 1, {i});
      break;
    }
    case GammaKind::GaussRoot: {
      const double gamma = eval_gamma(spec, lambda);
      for (int i = 0; i < n; ++i) g[i] = gamma / (n * lambda[i]);
      break;
    }
    case GammaKind::PowerMean: {
      double m = 0.0;
      for (int i = 0; i < n; ++i) m += std::pow(lambda[i], spec.p);
      const double pre = std::pow(m, 1.0 / spec.p - 1.0);
      for (int i = 0; i < n; ++i) g[i] = pre * std::pow(lambda[i], spec.p - 1.0);
      break;
    }
    case GammaKind::ConvexCombo:
      g = Vector::Constant(n, spec.t) + (1.0 - spec.t) * grad_gamma(*spec.inner, lambda);
      break;
  }
  return g;
}

Vector grad_gamma_closure(const CurvatureSpec& spec, const Vector& lambda) {
  if (in_cone_interior(spec, lambda, kClosureTol)) return grad_gamma(spec, lambda);
  require_closure(spec, lambda);
  const int n = spec.n;
  switch (spec.kind) {
    case GammaKind::Mean:
      return Vector::Ones(n);
    case GammaKind::SigmaKRoot:
      if (spec.k == 1) return Vector::Ones(n);
      return Vector();  // S_k = 0 on the Garding boundary, gradient blows up
    case GammaKind::GaussRoot:
      return Vector();
    case GammaKind::PowerMean: {
      const double gamma = eval_gamma(spec, lambda);
      if (!(gamma > 0.0)) return Vector();
      if (spec.p == 1.0) return Vector::Ones(n);
      Vector g(n);
      for (int i = 0; i < n; ++i)
        g[i] = std::pow(gamma, 1.0 - spec.p) * std::pow(std::max(lambda[i], 0.0), spec.p - 1.0);
      return g;
    }
    case GammaKind::ConvexCombo: {
      const Vector gi = grad_gamma_closure(*spec.inner, lambda);
      if (gi.size() == 0) return Vector();
      return Vector::Constant(n, spec.t) + (1.0 - spec.t) * gi;
    }
  }
  return Vector();
}

Matrix hess_gamma(const CurvatureSpec& spec, const Vector& lambda) {
  require_interior(spec, lambda);
  const int n = spec.n;
  Matrix h = Matrix::Zero(n, n);
  switch (spec.kind) {
    case GammaKind::Mean:
      break;
    case GammaKind::SigmaKRoot: {
      const int k = spec.k;
      const double s = elementary_symmetric(lambda, k);
      const double c1 = (1.0 / k) * (1.0 / k - 1.0) * std::pow(s, 1.0 / k - 2.0);
      const double c2 = (1.0 / k) * std::pow(s, 1.0 / k - 1.0);
      Vector d(n);
      for (int i = 0; i < n; ++i) d[i] = esym_excluding(lambda, k - 1, {i});
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          h(i, j) = c1 * d[i] * d[j];
          if (i != j) h(i, j) += c2 * esym_excluding(lambda, k - 2, {i, j});
        }
      break;
    }
    case GammaKind::GaussRoot: {
      const double gamma = eval_gamma(spec, lambda);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          h(i, j) = (i == j) ? gamma * (1.0 - n) / (double(n) * n * lambda[i] * lambda[i])
                             : gamma / (double(n) * n * lambda[i] * lambda[j]);
      break;
    }
    case GammaKind::PowerMean: {
      const double p = spec.p;
      double m = 0.0;
      for (int i = 0; i < n; ++i) m += std::pow(lambda[i], p);
      const double c1 = (1.0 - p) * std::pow(m, 1.0 / p - 2.0);
      const double c2 = (p - 1.0) * std::pow(m, 1.0 / p - 1.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          h(i, j) = c1 * std::pow(lambda[i], p - 1.0) * std::pow(lambda[j], p - 1.0);
          if (i == j) h(i, j) += c2 * std::pow(lambda[i], p - 2.0);
        }
      break;
    }
    case GammaKind::ConvexCombo:
      h = (1.0 - spec.t) * hess_gamma(*spec.inner, lambda);
      break;
  }
  return h;
}

double hess_quadform_eig(const CurvatureSpec& spec, const Vector& lambda, const Vector& xi) {
  const Matrix h = hess_gamma(spec, lambda);
  return xi.dot(h * xi);
}

double euler_residual(const CurvatureSpec& spec, const Vector& lambda) {
  const double gamma = eval_gamma(spec, lambda);
  const Vector g = grad_gamma(spec, lambda);
  return std::abs(gamma - g.dot(lambda));
}

// ---------------------------------------------------------------------------
// Matrix-level calculus
// ---------------------------------------------------------------------------

SpectralPoint SpectralPoint::decompose(const Matrix& symmetric) {
  Matrix s = 0.5 * (symmetric + symmetric.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  return {std::move(s), es.eigenvalues(), es.eigenvectors()};
}

Matrix matrix_grad(const CurvatureSpec& spec, const SpectralPoint& A) {
  const Vector g = grad_gamma(spec, A.eigenvalues);
  return A.eigenframe * g.asDiagonal() * A.eigenframe.transpose();
}

double matrix_hess_quadform(const CurvatureSpec& spec, const SpectralPoint& A,
                            const Matrix& T) {
  const Vector& lam = A.eigenvalues;
  const int n = spec.n;
  const Vector g = grad_gamma(spec, lam);
  const Matrix h = hess_gamma(spec, lam);
  const Matrix Tt = A.eigenframe.transpose() * T * A.eigenframe;

  double result = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) result += h(a, b) * Tt(a, a) * Tt(b, b);

  const double gap_tol = kEigenGapTol * std::max(1.0, lam.norm());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      double dd;
      if (std::abs(lam[b] - lam[a]) < gap_tol) {
        // Degenerate pair: the divided difference tends to the second
        // directional derivative along the (a,b) swap direction.
        dd = 0.5 * (h(a, a) + h(b, b)) - h(a, b);
      } else {
        dd = (g[b] - g[a]) / (lam[b] - lam[a]);
      }
      result += 2.0 * dd * Tt(a, b) * Tt(a, b);
    }
  return result;
}

// ---------------------------------------------------------------------------
// Sampling and classification
// ---------------------------------------------------------------------------

Vector sample_cone_point(const CurvatureSpec& spec, std::mt19937& rng) {
  const int n = spec.n;
  const ConeSpec cone = spec.cone();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double scale = std::exp(std::uniform_real_distribution<double>(-0.7, 0.7)(rng));

  // Mix strictly positive points with rejection-sampled general cone points so
  // non-positive corners of the cone are exercised too.
  if (unif(rng) < 0.5) {
    for (int tries = 0; tries < 200; ++tries) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = normal(rng);
      v.normalize();
      if (cone_contains(cone, v).margin > 0.02) return scale * v;
    }
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = std::abs(normal(rng)) + 0.05;
  v.normalize();
  return scale * v;
}

Classification classify(const CurvatureSpec& spec, int sample_count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  double max_sym = 0.0, max_scale = 0.0, min_grad = std::numeric_limits<double>::infinity();
  double min_q = std::numeric_limits<double>::infinity(), max_q = -min_q;
  double min_abs_qperp = std::numeric_limits<double>::infinity();
  bool qperp_pos = false, qperp_neg = false;

  std::vector<int> perm(spec.n);
  std::iota(perm.begin(), perm.end(), 0);

  for (int s = 0; s < sample_count; ++s) {
    Vector lam = sample_cone_point(spec, rng);
    const double gamma = eval_gamma(spec, lam);
    const double gscale = std::max(std::abs(gamma), 1e-300);

    std::shuffle(perm.begin(), perm.end(), rng);
    Vector plam(spec.n);
    for (int i = 0; i < spec.n; ++i) plam[i] = lam[perm[i]];
    max_sym = std::max(max_sym, std::abs(eval_gamma(spec, plam) - gamma) / gscale);

    for (double c : {0.5, 2.0, 10.0})
      max_scale = std::max(max_scale,
                           std::abs(eval_gamma(spec, c * lam) - c * gamma) / (c * gscale));

    const Vector g = grad_gamma(spec, lam);
    min_grad = std::min(min_grad, g.minCoeff());

    // Quadform samples on the unit sphere at |lambda| = 1 keep tolerances
    // comparable across samples (the Hessian is (-1)-homogeneous).
    const Vector lhat = lam.normalized();
    Vector xi(spec.n);
    for (int i = 0; i < spec.n; ++i) xi[i] = normal(rng);
    xi.normalize();
    const double q = hess_quadform_eig(spec, lhat, xi);
    min_q = std::min(min_q, q);
    max_q = std::max(max_q, q);

    Vector xp = xi - xi.dot(lhat) * lhat;
    if (xp.norm() > 1e-6) {
      xp.normalize();
      const double qp = hess_quadform_eig(spec, lhat, xp);
      min_abs_qperp = std::min(min_abs_qperp, std::abs(qp));
      (qp > 0 ? qperp_pos : qperp_neg) = true;
    }
  }

  double gamma_e1 = 0.0;
  bool e1_ok = true;
  try {
    Vector e1 = Vector::Zero(spec.n);
    e1[0] = 1.0;
    gamma_e1 = eval_gamma(spec, e1);
  } catch (const DomainError&) {
    e1_ok = false;
  }

  Classification c;
  c.samples = sample_count;
  c.symmetric = {max_sym < 1e-12, max_sym};
  c.homogeneous = {max_scale < 1e-12, max_scale};
  c.monotone = {min_grad > 0.0, min_grad};
  c.normalized = {e1_ok && std::abs(gamma_e1 - 1.0) < 1e-9,
                  e1_ok ? std::abs(gamma_e1 - 1.0) : 1.0};
  c.convex = {min_q >= -1e-10, min_q};
  c.concave = {max_q <= 1e-10, max_q};
  const bool strict = std::isfinite(min_abs_qperp) && min_abs_qperp > 1e-8 &&
                      (qperp_pos != qperp_neg);
  c.off_radial_strict = {strict, std::isfinite(min_abs_qperp) ? min_abs_qperp : 0.0};
  return c;
}

// ---------------------------------------------------------------------------
// JSON / text parsing
// ---------------------------------------------------------------------------

namespace {

CurvatureSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("curvature spec JSON must be an object with a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.value("n", 2);
  if (n < 1) throw std::invalid_argument("spec requires n >= 1");
  if (kind == "Mean") return CurvatureSpec::mean(n);
  if (kind == "SigmaKRoot") return CurvatureSpec::sigma_k_root(j.value("k", 1), n);
  if (kind == "GaussRoot") return CurvatureSpec::gauss_root(n);
  if (kind == "PowerMean") return CurvatureSpec::power_mean(j.value("p", 1.0), n);
  if (kind == "ConvexCombo") {
    if (!j.contains("inner")) throw std::invalid_argument("ConvexCombo needs \"inner\"");
    auto inner = spec_from_json(j.at("inner"));
    if (j.contains("n") && inner.n != n)
      throw std::invalid_argument("ConvexCombo n mismatch with inner spec");
    return CurvatureSpec::convex_combo(j.value("t", 0.5), std::move(inner));
  }
  throw std::invalid_argument("unknown curvature kind: " + kind);
}

}  // namespace

CurvatureSpec CurvatureSpec::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(j);
}

CurvatureSpec CurvatureSpec::parse(const std::string& text, int n) {
  if (!text.empty() && text.front() == '{') return from_json_text(text);
  if (n < 1) throw std::invalid_argument("spec requires n >= 1");
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "mean" || s == "h") return CurvatureSpec::mean(n);
  if (s == "gauss" || s == "gaussroot") return CurvatureSpec::gauss_root(n);
  if (s.rfind("sigma", 0) == 0)
    return CurvatureSpec::sigma_k_root(std::stoi(s.substr(5)), n);
  if (s.rfind("pmean", 0) == 0)
    return CurvatureSpec::power_mean(std::stod(s.substr(5)), n);
  throw std::invalid_argument("unknown curvature spec: " + text);
}

}  // namespace gammaflow
