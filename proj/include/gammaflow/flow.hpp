#pragma once

#include "gammaflow/geometry.hpp"

namespace gammaflow {

/// Explicit Euler time stepper for the graphical gamma-flow,
/// du/dt = W * gamma(lambda).
struct FlowConfig {
  CurvatureSpec spec;

  enum class DtPolicy { Fixed, CFL } dt_policy = DtPolicy::CFL;
  double dt = 0.0;       // Fixed policy
  double safety = 0.5;   // CFL: dt = safety * min(h)^2 / (4 * max sum_a dgamma_a)
  double T = 0.1;

  enum class Boundary { PinnedToExactTranslate, Frozen } boundary =
      Boundary::PinnedToExactTranslate;

  /// Cones whose minimum margin over the interior is traced every step.
  std::vector<ConeSpec> trace_cones;
};

struct FlowSample {
  double t = 0.0;
  double max_residual = 0.0;    // max |gamma(lambda) - <nu, e_{n+1}>|
  double min_cone_margin = 0.0; // first trace cone (or the spec cone)
  double max_abs_u = 0.0;
};

struct FlowRun {
  GraphPatch initial;
  GraphPatch final_patch;
  std::vector<FlowSample> series;
  std::vector<std::vector<double>> cone_margins;  // parallel to config cones
  std::vector<ConeSpec> traced_cones;
  bool completed = false;
  std::string failure;
};

/// One explicit step of size dt at time t; boundary cells (2-cell margin) are
/// refilled per policy.
GraphPatch flow_step(const GraphPatch& patch, const FlowConfig& config, double t,
                     double dt);

double cfl_dt(const GraphPatch& patch, const FlowConfig& config);

FlowRun flow_run(const GraphPatch& patch, const FlowConfig& config);

/// max over the interior of |u(.,T) - u(.,0) - T|; the run must have evolved a
/// translator with pinned-exact boundaries for this to measure scheme error.
double self_similarity_error(const FlowRun& run);

/// Per-step series of minimum cone margins for trace cone `which`.
const std::vector<double>& cone_trace(const FlowRun& run, std::size_t which = 0);

}  // namespace gammaflow
