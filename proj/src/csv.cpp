#include "gammaflow/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace gammaflow {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_patch_csv(std::ostream& os, const GraphPatch& patch) {
  patch.validate();
  os << "# patch n=" << patch.n << " dims=";
  for (int a = 0; a < patch.n; ++a) os << (a ? "," : "") << patch.dims[a];
  os << " origin=";
  for (int a = 0; a < patch.n; ++a) os << (a ? "," : "") << format_double(patch.origin[a]);
  os << " spacing=";
  for (int a = 0; a < patch.n; ++a) os << (a ? "," : "") << format_double(patch.spacing[a]);
  os << "\n";
  for (int a = 0; a < patch.n; ++a) os << "x" << a + 1 << ",";
  os << "u\n";
  std::vector<int> idx(patch.n, 0);
  for (std::size_t fl = 0; fl < patch.size(); ++fl) {
    const Vector x = patch.coord(idx);
    for (int a = 0; a < patch.n; ++a) os << format_double(x[a]) << ",";
    os << format_double(patch.u[fl]) << "\n";
    for (int a = patch.n - 1; a >= 0; --a) {
      if (++idx[a] < patch.dims[a]) break;
      idx[a] = 0;
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep)) out.push_back(tok);
  return out;
}

std::string meta_value(const std::string& header, const std::string& key) {
  const std::string tag = key + "=";
  const auto pos = header.find(tag);
  if (pos == std::string::npos)
    throw DomainError("patch CSV header lacks the " + key + " field");
  const auto end = header.find(' ', pos);
  return header.substr(pos + tag.size(), end == std::string::npos ? end : end - pos - tag.size());
}

}  // namespace

GraphPatch read_patch_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# patch", 0) != 0)
    throw DomainError("patch CSV must start with a '# patch' metadata line");
  GraphPatch p;
  p.n = std::stoi(meta_value(line, "n"));
  if (p.n < 1) throw DomainError("patch CSV declares n < 1");
  for (const auto& t : split(meta_value(line, "dims"), ','))
    p.dims.push_back(std::stoi(t));
  p.origin.resize(p.n);
  p.spacing.resize(p.n);
  {
    const auto o = split(meta_value(line, "origin"), ',');
    const auto s = split(meta_value(line, "spacing"), ',');
    if (static_cast<int>(o.size()) != p.n || static_cast<int>(s.size()) != p.n ||
        static_cast<int>(p.dims.size()) != p.n)
      throw DomainError("patch CSV metadata arity mismatch");
    for (int a = 0; a < p.n; ++a) {
      p.origin[a] = std::stod(o[a]);
      p.spacing[a] = std::stod(s[a]);
    }
  }
  if (!std::getline(is, line)) throw DomainError("patch CSV truncated after metadata");
  p.u.reserve(p.size());
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != p.n + 1)
      throw DomainError("patch CSV row has wrong column count");
    p.u.push_back(std::stod(cells.back()));
  }
  p.validate();
  return p;
}

GraphPatch read_patch_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open " + path);
  return read_patch_csv(is);
}

void write_profile_csv(std::ostream& os, const ProfileSolution& sol) {
  os << "x,u,du,ddu,lambda_rad,lambda_tan\n";
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double lt = i < sol.lambda_tan.size() ? sol.lambda_tan[i] : 0.0;
    os << format_double(sol.abscissa[i]) << "," << format_double(sol.u[i]) << ","
       << format_double(sol.du[i]) << "," << format_double(sol.ddu[i]) << ","
       << format_double(sol.lambda_rad[i]) << "," << format_double(lt) << "\n";
  }
}

void write_flow_series_csv(std::ostream& os, const FlowRun& run) {
  os << "t,max_residual,max_abs_u";
  for (std::size_t c = 0; c < run.traced_cones.size(); ++c) os << ",cone_margin_" << c + 1;
  os << "\n";
  for (std::size_t i = 0; i < run.series.size(); ++i) {
    const FlowSample& s = run.series[i];
    os << format_double(s.t) << "," << format_double(s.max_residual) << ","
       << format_double(s.max_abs_u);
    for (const auto& trace : run.cone_margins) os << "," << format_double(trace[i]);
    os << "\n";
  }
}

void write_diagnostics_csv(std::ostream& os, const GraphPatch& patch,
                           const CurvatureSpec& spec) {
  const ShapeField shape = shape_field(patch);
  const GammaField gf = gamma_field(shape, spec);
  const ResidualSummary res = translator_residual(shape, gf);
  const SxFields sx = sx_fields(shape, gf);
  const AwRatio aw = aw_ratio(shape, gf);
  const ScalarField q2 = q_squared_field(patch, shape, gf);
  const auto angles = angle_fields(shape);
  ScalarField identity = ScalarField::like(patch, shape.margin);
  try {
    identity = identity_check(patch, shape, spec);
  } catch (const NotATranslator&) {
    // keep the NaN column
  }

  for (int a = 0; a < patch.n; ++a) os << "x" << a + 1 << ",";
  os << "residual,j,g,gtilde,aw_ratio,q2";
  for (int a = 0; a < patch.n; ++a) os << ",angle_" << a + 1;
  os << ",identity_residual\n";

  for_each_interior(patch.dims, shape.margin, [&](const std::vector<int>& idx, std::size_t fl) {
    if (!std::isfinite(res.field.v[fl])) return;
    const Vector x = patch.coord(idx);
    for (int a = 0; a < patch.n; ++a) os << format_double(x[a]) << ",";
    os << format_double(res.field.v[fl]) << "," << format_double(sx.j_field.v[fl]) << ","
       << format_double(sx.g_field.v[fl]) << "," << format_double(sx.gtilde_field.v[fl])
       << "," << format_double(aw.field.v[fl]) << "," << format_double(q2.v[fl]);
    for (int a = 0; a < patch.n; ++a) os << "," << format_double(angles[a].v[fl]);
    os << "," << format_double(identity.v[fl]) << "\n";
  });
}

std::string dichotomy_json(const DichotomyReport& rep) {
  nlohmann::json j;
  j["branch"] = rep.branch_name;
  j["evidence"] = {
      {"residual_max", rep.residual_max},
      {"min_lambda", rep.min_lambda},
      {"theta", rep.theta},
      {"aw_spread", rep.aw_spread},
      {"q2_max", rep.q2_max},
      {"min_vanishing_angle", rep.min_vanishing_angle},
      {"single_curvature", rep.single_curvature},
  };
  return j.dump(2);
}

std::string classification_json(const Classification& c, const CurvatureSpec& spec) {
  auto prop = [](const PropertyEvidence& e) {
    return nlohmann::json{{"holds", e.holds}, {"margin", e.margin}};
  };
  nlohmann::json j;
  j["spec"] = spec.name();
  j["samples"] = c.samples;
  j["symmetric"] = prop(c.symmetric);
  j["homogeneous"] = prop(c.homogeneous);
  j["monotone"] = prop(c.monotone);
  j["normalized"] = prop(c.normalized);
  j["convex"] = prop(c.convex);
  j["concave"] = prop(c.concave);
  j["off_radial_strict"] = prop(c.off_radial_strict);
  return j.dump(2);
}

}  // namespace gammaflow
