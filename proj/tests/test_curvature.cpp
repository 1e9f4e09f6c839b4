#include <doctest.h>

#include <cmath>
#include <random>

#include "gammaflow/curvature.hpp"

using namespace gammaflow;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<CurvatureSpec> catalog() {
  return {
      CurvatureSpec::mean(3),
      CurvatureSpec::sigma_k_root(2, 3),
      CurvatureSpec::gauss_root(3),
      CurvatureSpec::power_mean(2.0, 2),
      CurvatureSpec::power_mean(3.0, 3),
      CurvatureSpec::convex_combo(0.5, CurvatureSpec::power_mean(2.0, 3)),
      CurvatureSpec::convex_combo(0.3, CurvatureSpec::gauss_root(3)),
  };
}

Matrix random_orthogonal(int n, std::mt19937& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  return Eigen::HouseholderQR<Matrix>(m).householderQ();
}

double gamma_of_matrix(const CurvatureSpec& spec, const Matrix& A) {
  return eval_gamma(spec, SpectralPoint::decompose(A).eigenvalues);
}

}  // namespace

TEST_CASE("elementary symmetric polynomials") {
  const Vector lam = vec({1.0, 2.0, 3.0});
  CHECK(elementary_symmetric(lam, 0) == doctest::Approx(1.0));
  CHECK(elementary_symmetric(lam, 1) == doctest::Approx(6.0));
  CHECK(elementary_symmetric(lam, 2) == doctest::Approx(11.0));
  CHECK(elementary_symmetric(lam, 3) == doctest::Approx(6.0));
  CHECK(elementary_symmetric(lam, 4) == 0.0);
}

TEST_CASE("cone membership worked examples") {
  const ConeCheck pos = cone_contains(ConeSpec::positive(), vec({1.0, 1.0}));
  CHECK(pos.inside);
  CHECK(pos.margin == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  CHECK(cone_contains(ConeSpec::two_convex_tilde(), vec({-0.1, 0.5, 0.5})).inside);

  // alpha |A| = 0.5 sqrt(1.25) ~ 0.559 exceeds H = 0.5
  CHECK_FALSE(cone_contains(ConeSpec::alpha_cone(0.5), vec({-0.5, 1.0})).inside);
}

TEST_CASE("alpha cone pinching ratio c(alpha)") {
  // In the plane the ratio lambda_1/lambda_2 = alpha^2 - 1 does not sit on the
  // Gamma_alpha boundary; calibrate a third eigenvalue z so that
  // (c, 1, z) does, then perturbing the ratio flips membership.
  const double alpha = 0.5;
  const double c = alpha * alpha - 1.0;
  // H = alpha |lambda| at (c, 1, z):
  // (1 - a2) z^2 + 2 (1+c) z + (1+c)^2 - a2 (1 + c^2) = 0, a2 = alpha^2.
  const double a2 = alpha * alpha;
  const double A = 1.0 - a2, B = 2.0 * (1.0 + c),
               C = (1.0 + c) * (1.0 + c) - a2 * (1.0 + c * c);
  const double z = (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
  CHECK(z > 0.0);
  CHECK(std::abs(cone_contains(ConeSpec::alpha_cone(alpha), vec({c, 1.0, z})).margin) < 1e-12);

  const double eps = 1e-6;
  CHECK(cone_contains(ConeSpec::alpha_cone(alpha), vec({c + eps, 1.0, z})).inside);
  CHECK_FALSE(cone_contains(ConeSpec::alpha_cone(alpha), vec({c - eps, 1.0, z})).inside);
}

TEST_CASE("cone margins scale invariantly and are total") {
  std::mt19937 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::vector<ConeSpec> cones = {
      ConeSpec::positive(), ConeSpec::alpha_cone(0.7), ConeSpec::two_convex_tilde(),
      ConeSpec::garding(2), ConeSpec::mean_positive()};
  for (int s = 0; s < 200; ++s) {
    Vector lam(3);
    for (int i = 0; i < 3; ++i) lam[i] = normal(rng);
    for (const ConeSpec& cone : cones) {
      const ConeCheck a = cone_contains(cone, lam);
      const ConeCheck b = cone_contains(cone, 3.7 * lam);
      CHECK(a.inside == b.inside);
      CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-10));
    }
  }
  CHECK(cone_contains(ConeSpec::positive(), vec({0.0, 0.0})).margin == 0.0);
}

TEST_CASE("closed-form values") {
  CHECK(eval_gamma(CurvatureSpec::mean(3), vec({1.0, 2.0, 3.0})) == doctest::Approx(6.0));
  CHECK(eval_gamma(CurvatureSpec::sigma_k_root(2, 3), vec({1.0, 2.0, 3.0})) ==
        doctest::Approx(std::sqrt(11.0)).epsilon(1e-14));
  CHECK(eval_gamma(CurvatureSpec::gauss_root(3), vec({1.0, 2.0, 3.0})) ==
        doctest::Approx(std::cbrt(6.0)).epsilon(1e-14));
  CHECK(eval_gamma(CurvatureSpec::power_mean(2.0, 2), vec({3.0, 4.0})) ==
        doctest::Approx(5.0).epsilon(1e-14));
  CHECK(eval_gamma(CurvatureSpec::convex_combo(0.5, CurvatureSpec::power_mean(2.0, 2)),
                   vec({3.0, 4.0})) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("boundary extension and domain errors") {
  CHECK(eval_gamma(CurvatureSpec::gauss_root(2), vec({0.0, 1.0})) == 0.0);
  CHECK(eval_gamma(CurvatureSpec::sigma_k_root(2, 2), vec({0.0, 1.0})) == 0.0);
  CHECK(eval_gamma(CurvatureSpec::power_mean(2.0, 2), vec({0.0, 1.0})) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(eval_gamma(CurvatureSpec::gauss_root(2), vec({-0.5, 1.0})), DomainError);
  CHECK_THROWS_AS(grad_gamma(CurvatureSpec::gauss_root(2), vec({0.0, 1.0})), DomainError);
  CHECK_THROWS_AS(eval_gamma(CurvatureSpec::mean(3), vec({1.0, 1.0})), DomainError);
}

TEST_CASE("gradient and Hessian match central finite differences") {
  std::mt19937 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const CurvatureSpec& spec : catalog()) {
    for (int s = 0; s < 50; ++s) {
      Vector lam = sample_cone_point(spec, rng);
      if (!in_cone_interior(spec, lam, 5e-2)) continue;
      const Vector g = grad_gamma(spec, lam);
      const Matrix hess = hess_gamma(spec, lam);
      const double h = 1e-5 * std::max(1.0, lam.norm());
      for (int i = 0; i < spec.n; ++i) {
        Vector lp = lam, lm = lam;
        lp[i] += h;
        lm[i] -= h;
        const double fd = (eval_gamma(spec, lp) - eval_gamma(spec, lm)) / (2.0 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
        const Vector gp = grad_gamma(spec, lp), gm = grad_gamma(spec, lm);
        for (int j = 0; j < spec.n; ++j)
          CHECK(hess(i, j) == doctest::Approx((gp[j] - gm[j]) / (2.0 * h)).epsilon(1e-5));
      }
      CHECK(euler_residual(spec, lam) < 1e-10 * std::max(1.0, eval_gamma(spec, lam)));
      (void)normal;
    }
  }
}

TEST_CASE("matrix gradient matches finite differences of gamma o spectrum") {
  std::mt19937 rng(7);
  for (const CurvatureSpec& spec : catalog()) {
    const int n = spec.n;
    int tested = 0;
    for (int s = 0; s < 200 && tested < 20; ++s) {
      Vector lam = sample_cone_point(spec, rng);
      if (!in_cone_interior(spec, lam, 5e-2)) continue;
      double gap = std::numeric_limits<double>::infinity();
      Vector sorted = lam;
      std::sort(sorted.data(), sorted.data() + n);
      for (int i = 0; i + 1 < n; ++i) gap = std::min(gap, sorted[i + 1] - sorted[i]);
      if (gap < 1e-2) continue;
      ++tested;

      const Matrix Q = random_orthogonal(n, rng);
      const Matrix A = Q * lam.asDiagonal() * Q.transpose();
      const SpectralPoint sp = SpectralPoint::decompose(A);
      const Matrix G = matrix_grad(spec, sp);
      const double h = 1e-6 * std::max(1.0, lam.norm());
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Matrix E = Matrix::Zero(n, n);
          E(i, j) = E(j, i) = 1.0;
          const double fd =
              (gamma_of_matrix(spec, A + h * E) - gamma_of_matrix(spec, A - h * E)) /
              (2.0 * h);
          const double analytic = (i == j) ? G(i, i) : 2.0 * G(i, j);
          CHECK(analytic == doctest::Approx(fd).epsilon(1e-5));
        }
    }
    CHECK(tested >= 10);
  }
}

TEST_CASE("matrix Hessian quadratic form matches second finite differences") {
  std::mt19937 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const CurvatureSpec& spec : catalog()) {
    const int n = spec.n;
    int tested = 0;
    for (int s = 0; s < 300 && tested < 15; ++s) {
      Vector lam = sample_cone_point(spec, rng);
      if (!in_cone_interior(spec, lam, 5e-2)) continue;
      double gap = std::numeric_limits<double>::infinity();
      Vector sorted = lam;
      std::sort(sorted.data(), sorted.data() + n);
      for (int i = 0; i + 1 < n; ++i) gap = std::min(gap, sorted[i + 1] - sorted[i]);
      if (gap < 1e-1) continue;
      ++tested;

      const Matrix Q = random_orthogonal(n, rng);
      const Matrix A = Q * lam.asDiagonal() * Q.transpose();
      const SpectralPoint sp = SpectralPoint::decompose(A);
      Matrix T(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) T(i, j) = T(j, i) = normal(rng);
      const double h = 1e-4 * std::max(1.0, lam.norm()) / std::max(1.0, T.norm());
      const double fd = (gamma_of_matrix(spec, A + h * T) - 2.0 * gamma_of_matrix(spec, A) +
                         gamma_of_matrix(spec, A - h * T)) /
                        (h * h);
      const double analytic = matrix_hess_quadform(spec, sp, T);
      const double scale = std::max({1.0, std::abs(fd), std::abs(analytic)});
      CHECK(std::abs(analytic - fd) / scale < 1e-4);
    }
    CHECK(tested >= 10);
  }
}

TEST_CASE("quadratic form is continuous across eigenvalue collisions") {
  std::mt19937 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto specs = catalog();
  for (const CurvatureSpec& spec : specs) {
    const int n = spec.n;
    Matrix T(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) T(i, j) = T(j, i) = normal(rng);
    Vector lam = Vector::Ones(n);
    for (int i = 0; i < n; ++i) lam[i] += 0.3 * i;
    lam[1] = lam[0] + 1e-9;  // inside the degenerate-pair window
    Vector lam_split = lam;
    lam_split[1] = lam[0] + 1e-5;  // just outside it
    const Matrix Q = random_orthogonal(n, rng);
    const SpectralPoint a = SpectralPoint::decompose(Q * lam.asDiagonal() * Q.transpose());
    const SpectralPoint b =
        SpectralPoint::decompose(Q * lam_split.asDiagonal() * Q.transpose());
    const double qa = matrix_hess_quadform(spec, a, T);
    const double qb = matrix_hess_quadform(spec, b, T);
    CHECK(std::abs(qa - qb) < 1e-3 * std::max(1.0, std::abs(qa)));
  }
}

TEST_CASE("classification flags per catalog entry") {
  const Classification mean = classify(CurvatureSpec::mean(3), 400);
  CHECK(mean.symmetric.holds);
  CHECK(mean.homogeneous.holds);
  CHECK(mean.monotone.holds);
  CHECK(mean.normalized.holds);
  CHECK(mean.convex.holds);
  CHECK(mean.concave.holds);
  CHECK_FALSE(mean.off_radial_strict.holds);

  const Classification gauss = classify(CurvatureSpec::gauss_root(3), 400);
  CHECK(gauss.concave.holds);
  CHECK_FALSE(gauss.convex.holds);
  CHECK_FALSE(gauss.normalized.holds);
  CHECK(gauss.off_radial_strict.holds);

  const Classification sigma = classify(CurvatureSpec::sigma_k_root(2, 3), 400);
  CHECK(sigma.concave.holds);
  CHECK_FALSE(sigma.normalized.holds);

  const Classification pmean = classify(CurvatureSpec::power_mean(2.0, 2), 400);
  CHECK(pmean.convex.holds);
  CHECK_FALSE(pmean.concave.holds);
  CHECK(pmean.normalized.holds);
  CHECK(pmean.off_radial_strict.holds);

  const Classification combo =
      classify(CurvatureSpec::convex_combo(0.5, CurvatureSpec::power_mean(2.0, 3)), 400);
  CHECK(combo.normalized.holds);
  CHECK(combo.convex.holds);
}

TEST_CASE("spec parsing") {
  CHECK(CurvatureSpec::parse("mean", 3).name() == CurvatureSpec::mean(3).name());
  CHECK(CurvatureSpec::parse("sigma2", 3).k == 2);
  CHECK(CurvatureSpec::parse("pmean2.5", 2).p == doctest::Approx(2.5));
  const CurvatureSpec j = CurvatureSpec::from_json_text(
      R"({"kind":"ConvexCombo","t":0.4,"inner":{"kind":"GaussRoot","n":3}})");
  CHECK(j.kind == GammaKind::ConvexCombo);
  CHECK(j.n == 3);
  CHECK(j.t == doctest::Approx(0.4));
  CHECK_THROWS_AS(CurvatureSpec::from_json_text("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(CurvatureSpec::from_json_text(R"({"kind":"Nope"})"), std::invalid_argument);
  CHECK_THROWS_AS(CurvatureSpec::parse("whatever", 2), std::invalid_argument);
}
