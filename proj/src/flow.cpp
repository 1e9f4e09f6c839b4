#include "gammaflow/flow.hpp"

#include <cmath>
#include <sstream>

namespace gammaflow {

namespace {

bool is_boundary_cell(const std::vector<int>& idx, const std::vector<int>& dims,
                      int margin) {
  for (std::size_t a = 0; a < dims.size(); ++a)
    if (idx[a] < margin || idx[a] >= dims[a] - margin) return true;
  return false;
}

// Worst-case sum of gamma gradient components over the populated interior;
// falls back to the gradient at the positive diagonal when no interior point
// admits a derivative (flat data sits on the cone boundary for most kinds).
double max_grad_sum(const ShapeField& shape, const FlowConfig& config) {
  double m = 0.0;
  bool any = false;
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl]) return;
    const Vector& lam = shape.pts[fl].lambda;
    if (!in_cone_interior(config.spec, lam, 1e-12)) return;
    m = std::max(m, grad_gamma(config.spec, lam).sum());
    any = true;
  });
  if (!any) m = grad_gamma(config.spec, Vector::Ones(shape.n)).sum();
  return m;
}

}  // namespace

double cfl_dt(const GraphPatch& patch, const FlowConfig& config) {
  const ShapeField shape = shape_field(patch);
  const double h = patch.spacing.minCoeff();
  const double gs = max_grad_sum(shape, config);
  return config.safety * h * h / (4.0 * gs);
}

GraphPatch flow_step(const GraphPatch& patch, const FlowConfig& config, double t,
                     double dt) {
  const ShapeField shape = shape_field(patch);
  GraphPatch next = patch;
  const int margin = shape.margin;

  std::vector<int> idx(patch.n, 0);
  for (std::size_t fl = 0; fl < patch.size(); ++fl) {
    if (is_boundary_cell(idx, patch.dims, margin)) {
      switch (config.boundary) {
        case FlowConfig::Boundary::PinnedToExactTranslate:
          if (!patch.exact_u)
            throw DomainError("pinned boundary needs an exact height source");
          next.u[fl] = patch.exact_u(patch.coord(idx)) + (t + dt);
          break;
        case FlowConfig::Boundary::Frozen:
          break;  // keep patch.u[fl]
      }
    } else {
      const PointShape& p = shape.pts[fl];
      double speed;
      try {
        speed = eval_gamma(config.spec, p.lambda);
      } catch (const DomainError& e) {
        std::ostringstream os;
        os << "flow left the cone closure at t = " << t << ", grid point (";
        for (int a = 0; a < patch.n; ++a) os << (a ? ", " : "") << idx[a];
        os << "): " << e.what();
        throw ConeExit(os.str());
      }
      next.u[fl] = patch.u[fl] + dt * p.W * speed;
    }
    for (int a = patch.n - 1; a >= 0; --a) {
      if (++idx[a] < patch.dims[a]) break;
      idx[a] = 0;
    }
  }
  return next;
}

namespace {

FlowSample sample_state(const GraphPatch& patch, const FlowConfig& config, double t,
                        std::vector<std::vector<double>>& cone_margins,
                        const std::vector<ConeSpec>& cones) {
  const ShapeField shape = shape_field(patch);
  FlowSample s;
  s.t = t;
  double max_res = 0.0, max_u = 0.0;
  std::vector<double> mins(cones.size(), std::numeric_limits<double>::infinity());
  for_each_interior(shape.dims, shape.margin, [&](const std::vector<int>&, std::size_t fl) {
    if (!shape.ok[fl]) return;
    const PointShape& p = shape.pts[fl];
    try {
      const double g = eval_gamma(config.spec, p.lambda);
      max_res = std::max(max_res, std::abs(g - 1.0 / p.W));
    } catch (const DomainError&) {
      max_res = std::numeric_limits<double>::infinity();
    }
    for (std::size_t c = 0; c < cones.size(); ++c)
      mins[c] = std::min(mins[c], cone_contains(cones[c], p.lambda).margin);
  });
  for (double x : patch.u) max_u = std::max(max_u, std::abs(x));
  s.max_residual = max_res;
  s.max_abs_u = max_u;
  s.min_cone_margin = mins.empty() ? 0.0 : mins[0];
  for (std::size_t c = 0; c < cones.size(); ++c) cone_margins[c].push_back(mins[c]);
  return s;
}

}  // namespace

FlowRun flow_run(const GraphPatch& patch, const FlowConfig& config) {
  patch.validate();
  if (config.boundary == FlowConfig::Boundary::PinnedToExactTranslate && !patch.exact_u)
    throw DomainError("pinned boundary needs an exact height source");
  if (config.dt_policy == FlowConfig::DtPolicy::Fixed && !(config.dt > 0.0))
    throw DomainError("fixed time step must be positive");
  if (!(config.T > 0.0)) throw DomainError("final time must be positive");

  FlowRun run;
  run.initial = patch;
  run.traced_cones = config.trace_cones;
  if (run.traced_cones.empty()) run.traced_cones.push_back(config.spec.cone());
  run.cone_margins.assign(run.traced_cones.size(), {});

  GraphPatch cur = patch;
  double t = 0.0;
  run.series.push_back(sample_state(cur, config, t, run.cone_margins, run.traced_cones));
  const double u0_scale = std::max(1.0, run.series.front().max_abs_u);

  while (t < config.T - 1e-15 * config.T) {
    double dt = (config.dt_policy == FlowConfig::DtPolicy::Fixed) ? config.dt
                                                                  : cfl_dt(cur, config);
    dt = std::min(dt, config.T - t);
    cur = flow_step(cur, config, t, dt);
    t += dt;
    run.series.push_back(sample_state(cur, config, t, run.cone_margins, run.traced_cones));
    if (run.series.back().max_abs_u > 10.0 * (u0_scale + t)) {
      std::ostringstream os;
      os << "height blew up at t = " << t << " (max |u| = "
         << run.series.back().max_abs_u << ")";
      run.failure = os.str();
      run.final_patch = cur;
      throw Instability(os.str());
    }
  }
  run.final_patch = cur;
  run.completed = true;
  return run;
}

double self_similarity_error(const FlowRun& run) {
  if (!run.completed) throw DomainError("run did not complete");
  const double T = run.series.back().t;
  double m = 0.0;
  // Skip the 2-cell pinned boundary; it is exact by construction.
  for_each_interior(run.initial.dims, 2, [&](const std::vector<int>&, std::size_t fl) {
    m = std::max(m, std::abs(run.final_patch.u[fl] - run.initial.u[fl] - T));
  });
  return m;
}

const std::vector<double>& cone_trace(const FlowRun& run, std::size_t which) {
  if (which >= run.cone_margins.size()) throw DomainError("trace cone index out of range");
  return run.cone_margins[which];
}

}  // namespace gammaflow
