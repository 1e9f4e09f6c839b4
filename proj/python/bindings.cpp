#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gammaflow/csv.hpp"
#include "gammaflow/exact.hpp"

namespace py = pybind11;
using namespace gammaflow;

namespace {

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::vector<double> to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

ConeSpec cone_from_name(const std::string& name, double alpha, int k) {
  if (name == "positive") return ConeSpec::positive();
  if (name == "alpha") return ConeSpec::alpha_cone(alpha);
  if (name == "two_convex_tilde") return ConeSpec::two_convex_tilde();
  if (name == "garding") return ConeSpec::garding(k);
  if (name == "mean_positive") return ConeSpec::mean_positive();
  throw std::invalid_argument("unknown cone: " + name);
}

py::dict evidence(const PropertyEvidence& e) {
  py::dict d;
  d["holds"] = e.holds;
  d["margin"] = e.margin;
  return d;
}

GraphPatch grim_patch_default(double omega, int n, int res) {
  GrimSpec gs{omega, n};
  Vector lo = Vector::Constant(n, -1.0), hi = Vector::Constant(n, 1.0);
  lo[0] = 0.05 * omega;
  hi[0] = 0.95 * omega;
  return grim_patch(gs, lo, hi, std::vector<int>(static_cast<std::size_t>(n), res));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical laboratory for translators of 1-homogeneous curvature flows";

  py::class_<CurvatureSpec>(m, "CurvatureSpec")
      .def_property_readonly("n", [](const CurvatureSpec& s) { return s.n; })
      .def("name", &CurvatureSpec::name)
      .def("__repr__", [](const CurvatureSpec& s) { return "<CurvatureSpec " + s.name() + ">"; });

  m.def("parse_spec",
        [](const std::string& text, int n) { return CurvatureSpec::parse(text, n); },
        py::arg("text"), py::arg("n") = 2,
        "Shorthand ('mean', 'sigma2', 'gauss', 'pmean2', ...) or JSON spec");

  m.def("eval_gamma",
        [](const CurvatureSpec& s, const std::vector<double>& lam) {
          return eval_gamma(s, to_vector(lam));
        },
        py::arg("spec"), py::arg("lam"));
  m.def("grad_gamma",
        [](const CurvatureSpec& s, const std::vector<double>& lam) {
          return to_std(grad_gamma(s, to_vector(lam)));
        },
        py::arg("spec"), py::arg("lam"));
  m.def("euler_residual",
        [](const CurvatureSpec& s, const std::vector<double>& lam) {
          return euler_residual(s, to_vector(lam));
        },
        py::arg("spec"), py::arg("lam"));

  m.def("cone_margin",
        [](const std::string& cone, const std::vector<double>& lam, double alpha, int k) {
          const ConeCheck c = cone_contains(cone_from_name(cone, alpha, k), to_vector(lam));
          py::dict d;
          d["inside"] = c.inside;
          d["margin"] = c.margin;
          return d;
        },
        py::arg("cone"), py::arg("lam"), py::arg("alpha") = 1.0, py::arg("k") = 1);

  m.def("elementary_symmetric",
        [](const std::vector<double>& lam, int k) {
          return elementary_symmetric(to_vector(lam), k);
        },
        py::arg("lam"), py::arg("k"));

  m.def("classify",
        [](const CurvatureSpec& s, int samples, unsigned seed) {
          const Classification c = classify(s, samples, seed);
          py::dict d;
          d["samples"] = c.samples;
          d["symmetric"] = evidence(c.symmetric);
          d["homogeneous"] = evidence(c.homogeneous);
          d["monotone"] = evidence(c.monotone);
          d["normalized"] = evidence(c.normalized);
          d["convex"] = evidence(c.convex);
          d["concave"] = evidence(c.concave);
          d["off_radial_strict"] = evidence(c.off_radial_strict);
          return d;
        },
        py::arg("spec"), py::arg("samples") = 1000, py::arg("seed") = 2024);

  m.def("cutoff_f", &cutoff_f, py::arg("r"));
  m.def("c_alpha", &c_alpha, py::arg("alpha"));

  m.def("grim_max_residual",
        [](double omega, int n, const std::string& spec_text, int samples) {
          const CurvatureSpec spec = CurvatureSpec::parse(spec_text, n);
          GrimSpec gs{omega, n};
          std::mt19937 rng(7);
          std::uniform_real_distribution<double> ux(0.05 * omega, 0.95 * omega);
          std::uniform_real_distribution<double> uy(-1.0, 1.0);
          double max_res = 0.0;
          for (int i = 0; i < samples; ++i) {
            Vector x(n);
            x[0] = ux(rng);
            for (int a = 1; a < n; ++a) x[a] = uy(rng);
            const PointShape p = grim_shape(gs, x);
            max_res = std::max(max_res,
                               std::abs(eval_gamma(spec, p.lambda) - 1.0 / p.W));
          }
          return max_res;
        },
        py::arg("omega"), py::arg("n") = 2, py::arg("spec") = "mean",
        py::arg("samples") = 1000,
        "Max |gamma(lambda) - <nu, e_{n+1}>| on random analytic Grim Reaper samples");

  m.def("shoot_bowl",
        [](const std::string& spec_text, int n, double r_max, double step) {
          const ProfileSolution sol =
              shoot_bowl(CurvatureSpec::parse(spec_text, n), n, r_max, step);
          py::dict d;
          d["r"] = sol.abscissa;
          d["u"] = sol.u;
          d["du"] = sol.du;
          d["ddu"] = sol.ddu;
          d["lambda_rad"] = sol.lambda_rad;
          d["lambda_tan"] = sol.lambda_tan;
          d["tip_curvature"] = sol.tip_curvature;
          return d;
        },
        py::arg("spec") = "mean", py::arg("n") = 2, py::arg("r_max") = 20.0,
        py::arg("step") = 0.01);

  m.def("flow_grim_error",
        [](double omega, int n, int res, double T, double safety,
           const std::string& spec_text) {
          const GraphPatch patch = grim_patch_default(omega, n, res);
          FlowConfig config;
          config.spec = CurvatureSpec::parse(spec_text, n);
          config.T = T;
          config.safety = safety;
          const FlowRun run = flow_run(patch, config);
          return self_similarity_error(run);
        },
        py::arg("omega") = M_PI, py::arg("n") = 1, py::arg("res") = 101,
        py::arg("T") = 0.05, py::arg("safety") = 0.5, py::arg("spec") = "mean",
        "Evolve a Grim Reaper and report max |u(T) - u(0) - T|");

  m.def("grim_verdict",
        [](double omega, int n, int res, const std::string& spec_text) {
          const GraphPatch patch = grim_patch_default(omega, n, res);
          const CurvatureSpec spec = CurvatureSpec::parse(spec_text, n);
          const ShapeField shape = shape_field(patch);
          const GammaField gf = gamma_field(shape, spec);
          return dichotomy_report(patch, shape, gf, spec).branch_name;
        },
        py::arg("omega") = M_PI, py::arg("n") = 2, py::arg("res") = 101,
        py::arg("spec") = "mean");

  m.def("patch_csv_roundtrip_error",
        [](double omega, int n, int res) {
          const GraphPatch patch = grim_patch_default(omega, n, res);
          std::stringstream ss;
          write_patch_csv(ss, patch);
          const GraphPatch back = read_patch_csv(ss);
          double err = 0.0;
          for (std::size_t i = 0; i < patch.u.size(); ++i)
            err = std::max(err, std::abs(patch.u[i] - back.u[i]));
          return err;
        },
        py::arg("omega") = M_PI, py::arg("n") = 2, py::arg("res") = 21);

  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<ConeExit>(m, "ConeExit");
  py::register_exception<NotATranslator>(m, "NotATranslatorError");
}
