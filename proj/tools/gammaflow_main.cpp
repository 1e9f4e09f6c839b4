#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "gammaflow/csv.hpp"
#include "gammaflow/exact.hpp"

using namespace gammaflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNumericalFailure = 3;

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open " + path + " for writing");
  fn(os);
}

GraphPatch default_grim_patch(double omega, int n, int res) {
  GrimSpec gs{omega, n};
  Vector lo = Vector::Constant(n, -1.0), hi = Vector::Constant(n, 1.0);
  lo[0] = 0.05 * omega;
  hi[0] = 0.95 * omega;
  return grim_patch(gs, lo, hi, std::vector<int>(static_cast<std::size_t>(n), res));
}

int cmd_check(const std::string& spec_text, int n, const std::vector<std::string>& require,
              int samples, unsigned seed) {
  const CurvatureSpec spec = CurvatureSpec::parse(spec_text, n);
  const Classification c = classify(spec, samples, seed);
  std::cout << classification_json(c, spec) << "\n";
  bool ok = true;
  for (const std::string& r : require) {
    const PropertyEvidence* e = nullptr;
    if (r == "symmetric") e = &c.symmetric;
    else if (r == "homogeneous") e = &c.homogeneous;
    else if (r == "monotone") e = &c.monotone;
    else if (r == "normalized") e = &c.normalized;
    else if (r == "convex") e = &c.convex;
    else if (r == "concave") e = &c.concave;
    else if (r == "off_radial_strict") e = &c.off_radial_strict;
    else throw std::invalid_argument("unknown property: " + r);
    if (!e->holds) {
      std::cout << "required property failed: " << r << "\n";
      ok = false;
    }
  }
  return ok ? kExitOk : kExitPropertyFailed;
}

int cmd_grim(double omega, int n, int res, const std::string& spec_text,
             const std::string& out) {
  const CurvatureSpec spec = CurvatureSpec::parse(spec_text, n);
  const GraphPatch patch = default_grim_patch(omega, n, res);
  // Residual from analytic curvature samples, not finite differences.
  GrimSpec gs{omega, n};
  double max_res = 0.0;
  std::vector<int> idx(n, 0);
  for (std::size_t fl = 0; fl < patch.size(); ++fl) {
    const PointShape p = grim_shape(gs, patch.coord(idx));
    max_res = std::max(max_res, std::abs(eval_gamma(spec, p.lambda) - 1.0 / p.W));
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < patch.dims[a]) break;
      idx[a] = 0;
    }
  }
  if (!out.empty()) write_file(out, [&](std::ostream& os) { write_patch_csv(os, patch); });
  std::cout << "grim omega=" << omega << " n=" << n << " res=" << res
            << " max residual " << format_double(max_res) << "\n";
  return kExitOk;
}

int cmd_bowl(const std::string& spec_text, int n, double r_max, double step,
             const std::string& out) {
  const CurvatureSpec spec = CurvatureSpec::parse(spec_text, n);
  const ProfileSolution sol = shoot_bowl(spec, n, r_max, step);
  double max_res = 0.0;
  for (std::size_t i = 1; i < sol.size(); ++i) {
    Vector lam = Vector::Constant(n, sol.lambda_tan[i]);
    lam[0] = sol.lambda_rad[i];
    const double W = std::sqrt(1.0 + sol.du[i] * sol.du[i]);
    max_res = std::max(max_res, std::abs(eval_gamma(spec, lam) - 1.0 / W));
  }
  if (!out.empty()) write_file(out, [&](std::ostream& os) { write_profile_csv(os, sol); });
  std::cout << "bowl spec=" << spec.name() << " tip u''(0)=" << format_double(sol.tip_curvature)
            << " max residual " << format_double(max_res) << "\n";
  return kExitOk;
}

int cmd_flow(bool grim, const std::string& input, double omega, int n, int res,
             const std::string& spec_text, double T, double cfl, double dt,
             const std::string& out) {
  GraphPatch patch;
  if (grim) patch = default_grim_patch(omega, n, res);
  else if (!input.empty()) patch = read_patch_csv_file(input);
  else throw std::invalid_argument("flow needs --grim or --input");

  FlowConfig config;
  config.spec = CurvatureSpec::parse(spec_text, patch.n);
  config.T = T;
  if (dt > 0.0) {
    config.dt_policy = FlowConfig::DtPolicy::Fixed;
    config.dt = dt;
  } else {
    config.dt_policy = FlowConfig::DtPolicy::CFL;
    config.safety = cfl;
  }
  config.boundary = patch.exact_u ? FlowConfig::Boundary::PinnedToExactTranslate
                                  : FlowConfig::Boundary::Frozen;
  const FlowRun run = flow_run(patch, config);
  if (!out.empty()) write_file(out, [&](std::ostream& os) { write_flow_series_csv(os, run); });
  if (patch.exact_u) {
    std::cout << "flow T=" << T << " steps=" << run.series.size() - 1
              << " self-similarity error " << format_double(self_similarity_error(run))
              << "\n";
  } else {
    std::cout << "flow T=" << T << " steps=" << run.series.size() - 1
              << " final max residual " << format_double(run.series.back().max_residual)
              << "\n";
  }
  return kExitOk;
}

int cmd_residual(const std::string& input, const std::string& spec_text) {
  const GraphPatch patch = read_patch_csv_file(input);
  const ShapeField shape = shape_field(patch);
  const GammaField gf = gamma_field(shape, CurvatureSpec::parse(spec_text, patch.n));
  const ResidualSummary res = translator_residual(shape, gf);
  std::cout << "residual max " << format_double(res.max_abs) << " mean "
            << format_double(res.mean_abs) << "\n";
  return kExitOk;
}

int cmd_identity(const std::string& input, const std::string& spec_text, double tol) {
  const GraphPatch patch = read_patch_csv_file(input);
  const ShapeField shape = shape_field(patch);
  const ScalarField id =
      identity_check(patch, shape, CurvatureSpec::parse(spec_text, patch.n), tol);
  std::cout << "identity residual max " << format_double(id.max_abs()) << " mean "
            << format_double(id.mean_abs()) << "\n";
  return kExitOk;
}

int cmd_diagnose(const std::string& input, const std::string& spec_text,
                 const std::string& out) {
  const GraphPatch patch = read_patch_csv_file(input);
  const CurvatureSpec spec = CurvatureSpec::parse(spec_text, patch.n);
  const ShapeField shape = shape_field(patch);
  const GammaField gf = gamma_field(shape, spec);
  if (!out.empty())
    write_file(out, [&](std::ostream& os) { write_diagnostics_csv(os, patch, spec); });
  const DichotomyReport rep = dichotomy_report(patch, shape, gf, spec);
  std::cout << dichotomy_json(rep) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for translators of 1-homogeneous curvature flows"};
  app.require_subcommand(1);

  std::string spec_text = "mean", input, out;
  int n = 2, res = 201, samples = 1000;
  unsigned seed = 2024;
  double omega = M_PI, T = 0.1, cfl = 0.5, dt = 0.0, r_max = 20.0, step = 0.01;
  double tol = 0.0;
  bool grim_init = false;
  std::vector<std::string> require;

  auto* check = app.add_subcommand("check", "Classify a curvature function by sampling");
  check->add_option("spec", spec_text, "spec shorthand or JSON")->required();
  check->add_option("--n", n, "ambient eigenvalue count");
  check->add_option("--require", require, "properties that must hold (exit 1 otherwise)");
  check->add_option("--samples", samples);
  check->add_option("--seed", seed);

  auto* grim = app.add_subcommand("grim", "Sample a Grim Reaper cylinder");
  grim->add_option("--omega", omega, "slab width, >= pi");
  grim->add_option("--n", n);
  grim->add_option("--res", res, "grid points per axis");
  grim->add_option("--spec", spec_text);
  grim->add_option("--out", out, "patch CSV path");

  auto* bowl = app.add_subcommand("bowl", "Shoot the rotational bowl profile");
  bowl->add_option("--spec", spec_text);
  bowl->add_option("--n", n);
  bowl->add_option("--rmax", r_max);
  bowl->add_option("--step", step);
  bowl->add_option("--out", out, "profile CSV path");

  auto* flow = app.add_subcommand("flow", "Evolve a patch by the gamma-flow");
  flow->add_flag("--grim", grim_init, "start from a Grim Reaper patch");
  flow->add_option("--input", input, "patch CSV to evolve");
  flow->add_option("--omega", omega);
  flow->add_option("--n", n);
  flow->add_option("--res", res);
  flow->add_option("--spec", spec_text);
  flow->add_option("--T", T, "final time");
  flow->add_option("--cfl", cfl, "CFL safety factor");
  flow->add_option("--dt", dt, "fixed step (overrides CFL)");
  flow->add_option("--out", out, "series CSV path");

  auto* residual = app.add_subcommand("residual", "Translator residual of a patch CSV");
  residual->add_option("--input", input)->required();
  residual->add_option("--spec", spec_text);

  auto* identity = app.add_subcommand("identity", "Translator identity residual");
  identity->add_option("--input", input)->required();
  identity->add_option("--spec", spec_text);
  identity->add_option("--tol", tol, "translator gate (0 = automatic)");

  auto* diagnose = app.add_subcommand("diagnose", "Dichotomy verdict and field dump");
  diagnose->add_option("--input", input)->required();
  diagnose->add_option("--spec", spec_text);
  diagnose->add_option("--out", out, "diagnostics CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (check->parsed()) return cmd_check(spec_text, n, require, samples, seed);
    if (grim->parsed()) return cmd_grim(omega, n, res, spec_text, out);
    if (bowl->parsed()) return cmd_bowl(spec_text, n, r_max, step, out);
    if (flow->parsed()) return cmd_flow(grim_init, input, omega, n, res, spec_text, T, cfl, dt, out);
    if (residual->parsed()) return cmd_residual(input, spec_text);
    if (identity->parsed()) return cmd_identity(input, spec_text, tol);
    if (diagnose->parsed()) return cmd_diagnose(input, spec_text, out);
  } catch (const ConeExit& e) {
    std::cerr << "numerical failure (cone exit): " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const RootBracketFailure& e) {
    std::cerr << "numerical failure (root bracket): " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const Instability& e) {
    std::cerr << "numerical failure (instability): " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const StepTooLarge& e) {
    std::cerr << "numerical failure (step too large): " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
