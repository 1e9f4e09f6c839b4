#include "gammaflow/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gammaflow {

namespace {

struct State {
  double u, v;
};

template <class Rhs>
State rk4_step(const Rhs& rhs, double x, const State& y, double h) {
  const auto [k1u, k1v] = rhs(x, y);
  const State y2{y.u + 0.5 * h * k1u, y.v + 0.5 * h * k1v};
  const auto [k2u, k2v] = rhs(x + 0.5 * h, y2);
  const State y3{y.u + 0.5 * h * k2u, y.v + 0.5 * h * k2v};
  const auto [k3u, k3v] = rhs(x + 0.5 * h, y3);
  const State y4{y.u + h * k3u, y.v + h * k3v};
  const auto [k4u, k4v] = rhs(x + h, y4);
  return {y.u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u),
          y.v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)};
}

}  // namespace

ProfileSolution solve_grim_ivp(double a, double h0, double step) {
  if (!(step > 0.0)) throw DomainError("step must be positive");
  if (!(a >= 0.0)) throw DomainError("tilt a must be nonnegative");
  const double one_a2 = 1.0 + a * a;
  auto rhs = [one_a2](double, const State& y) {
    return std::pair<double, double>{y.v, (one_a2 + y.v * y.v) / one_a2};
  };
  auto curvature = [one_a2, a](double v, double ddu) {
    const double W = std::sqrt(one_a2 + v * v);
    return one_a2 * ddu / (W * W * W);
  };

  std::vector<double> xs{0.0}, us{h0}, vs{0.0};
  State y{h0, 0.0};
  double x = 0.0;
  while (true) {
    const State full = rk4_step(rhs, x, y, step);
    const State mid = rk4_step(rhs, x, y, 0.5 * step);
    const State half = rk4_step(rhs, x + 0.5 * step, mid, 0.5 * step);
    const double err = std::max(std::abs(full.u - half.u), std::abs(full.v - half.v));
    const double tol = 1e-6 * (1.0 + std::abs(half.v));
    if (std::abs(half.v) > 1e6) break;  // blow-up wall reached
    if (err > tol) {
      if (std::abs(half.v) < 1e2) {
        std::ostringstream os;
        os << "grim IVP local error " << err << " exceeds tolerance " << tol
           << " at x = " << x << " with step " << step;
        throw StepTooLarge(os.str());
      }
      break;  // entering the blow-up region, halt
    }
    y = half;
    x += step;
    xs.push_back(x);
    us.push_back(y.u);
    vs.push_back(y.v);
  }

  // Mirror through the tip: u even, u' odd.
  const std::size_t m = xs.size();
  ProfileSolution sol;
  sol.kind = ProfileKind::GrimProfile;
  sol.step = step;
  sol.tilt = a;
  sol.abscissa.resize(2 * m - 1);
  sol.u.resize(2 * m - 1);
  sol.du.resize(2 * m - 1);
  sol.ddu.resize(2 * m - 1);
  sol.lambda_rad.resize(2 * m - 1);
  sol.lambda_tan.assign(2 * m - 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double ddu = (one_a2 + vs[i] * vs[i]) / one_a2;
    const double lam = curvature(vs[i], ddu);
    const std::size_t right = m - 1 + i, left = m - 1 - i;
    sol.abscissa[right] = xs[i];
    sol.abscissa[left] = -xs[i];
    sol.u[right] = sol.u[left] = us[i];
    sol.du[right] = vs[i];
    sol.du[left] = -vs[i];
    sol.ddu[right] = sol.ddu[left] = ddu;
    sol.lambda_rad[right] = sol.lambda_rad[left] = lam;
  }
  return sol;
}

namespace {

// gamma(lambda_rad, lambda_tan, ..., lambda_tan) = target, solved for
// lambda_rad. Monotone in lambda_rad: bracket doubling then bisection with a
// final Newton polish.
double solve_lambda_rad(const CurvatureSpec& spec, int n, double lambda_tan,
                        double target, long* evals) {
  auto gamma_at = [&](double lr) {
    Vector lam = Vector::Constant(n, lambda_tan);
    lam[0] = lr;
    ++*evals;
    return eval_gamma(spec, lam);
  };

  double lo = 0.0, f_lo;
  try {
    f_lo = gamma_at(lo) - target;
  } catch (const DomainError& e) {
    throw ConeExit(std::string("cone exit probing lambda_rad = 0: ") + e.what());
  }
  if (f_lo > 0.0) {
    std::ostringstream os;
    os << "no bracket: gamma(0, " << lambda_tan << ", ...) already exceeds target "
       << target;
    throw RootBracketFailure(os.str());
  }

  double hi = std::max(1.0, 2.0 * std::abs(lambda_tan));
  double f_hi = gamma_at(hi) - target;
  for (int d = 0; f_hi < 0.0; ++d) {
    if (d >= 60) {
      std::ostringstream os;
      os << "bracket doubling failed on [0, " << hi << "] for target " << target;
      throw RootBracketFailure(os.str());
    }
    hi *= 2.0;
    f_hi = gamma_at(hi) - target;
  }

  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = gamma_at(mid) - target;
    if (f_mid < 0.0) { lo = mid; f_lo = f_mid; }
    else { hi = mid; f_hi = f_mid; }
  }
  double root = 0.5 * (lo + hi);
  // One Newton step when the derivative is available sharpens to ~1e-16.
  try {
    Vector lam = Vector::Constant(n, lambda_tan);
    lam[0] = root;
    if (in_cone_interior(spec, lam, 1e-12)) {
      const double d = grad_gamma(spec, lam)[0];
      if (d > 0.0) root -= (eval_gamma(spec, lam) - target) / d;
    }
  } catch (const DomainError&) {
    // keep the bisection root
  }
  return root;
}

}  // namespace

ProfileSolution shoot_bowl(const CurvatureSpec& spec, int n, double r_max, double step) {
  if (n < 2) throw DomainError("bowl shooting needs n >= 2");
  if (!(step > 0.0 && r_max > step)) throw DomainError("need 0 < step < r_max");
  const Vector ones = Vector::Ones(n);
  if (!cone_contains(spec.cone(), ones).inside)
    throw DomainError("cone must contain the positive diagonal");
  if (grad_gamma(spec, ones).minCoeff() <= 0.0)
    throw DomainError("spec must be monotone");

  const double c = 1.0 / eval_gamma(spec, ones);

  ProfileSolution sol;
  sol.kind = ProfileKind::BowlProfile;
  sol.step = step;
  sol.tip_curvature = c;
  sol.spec = spec;

  long evals = 0;
  auto rhs = [&](double r, const State& y) {
    const double v = y.v;
    const double W = std::sqrt(1.0 + v * v);
    const double lambda_tan = v / (r * W);
    const double target = 1.0 / W;
    const double lambda_rad = solve_lambda_rad(spec, n, lambda_tan, target, &evals);
    return std::pair<double, double>{v, lambda_rad * W * W * W};
  };

  auto push = [&](double r, double u, double v, double ddu) {
    const double W = std::sqrt(1.0 + v * v);
    sol.abscissa.push_back(r);
    sol.u.push_back(u);
    sol.du.push_back(v);
    sol.ddu.push_back(ddu);
    sol.lambda_rad.push_back(ddu / (W * W * W));
    sol.lambda_tan.push_back(r > 0.0 ? v / (r * W) : ddu / (W * W * W));
  };

  // Umbilic tip and the series start one step out (lambda_tan is 0/0 at r=0).
  push(0.0, 0.0, 0.0, c);
  double r = step;
  State y{0.5 * c * step * step, c * step};
  push(r, y.u, y.v, rhs(r, y).second);

  while (r < r_max - 0.5 * step) {
    y = rk4_step(rhs, r, y, step);
    r += step;
    push(r, y.u, y.v, rhs(r, y).second);
  }
  sol.rhs_evaluations = evals;
  return sol;
}

double profile_height(const ProfileSolution& sol, double x) {
  const auto& xs = sol.abscissa;
  if (x < xs.front() - 1e-12 || x > xs.back() + 1e-12) {
    std::ostringstream os;
    os << "abscissa " << x << " outside the solved range [" << xs.front() << ", "
       << xs.back() << "]";
    throw InterpolationRange(os.str());
  }
  x = std::clamp(x, xs.front(), xs.back());
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (i + 1 >= xs.size()) i = xs.size() - 2;
  const double h = xs[i + 1] - xs[i];
  const double s = (x - xs[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  // Cubic Hermite on (u, du).
  return (2 * s3 - 3 * s2 + 1) * sol.u[i] + (s3 - 2 * s2 + s) * h * sol.du[i] +
         (-2 * s3 + 3 * s2) * sol.u[i + 1] + (s3 - s2) * h * sol.du[i + 1];
}

GraphPatch profile_to_patch(const ProfileSolution& sol, int n, const Vector& lo,
                            const Vector& hi, const std::vector<int>& dims) {
  if (sol.size() < 2) throw InterpolationRange("profile too short to interpolate");
  if (sol.kind == ProfileKind::GrimProfile) {
    const double a = sol.tilt;
    const double omega = M_PI * std::sqrt(1.0 + a * a);
    const double center = 0.5 * omega;
    if (lo[0] - center < sol.abscissa.front() || hi[0] - center > sol.abscissa.back())
      throw InterpolationRange("patch domain exceeds the solved grim profile");
    return make_patch(
        n, lo, hi, dims,
        [sol, a, center, n](const Vector& x) {
          return profile_height(sol, x[0] - center) + a * x[n - 1];
        },
        BoundaryPolicy::Exact);
  }
  // Bowl: revolve about the origin.
  double corner = 0.0;
  for (int a = 0; a < n; ++a)
    corner += std::pow(std::max(std::abs(lo[a]), std::abs(hi[a])), 2);
  if (std::sqrt(corner) > sol.abscissa.back())
    throw InterpolationRange("patch corners exceed the solved bowl radius");
  return make_patch(
      n, lo, hi, dims,
      [sol](const Vector& x) { return profile_height(sol, x.norm()); },
      BoundaryPolicy::Exact);
}

}  // namespace gammaflow
