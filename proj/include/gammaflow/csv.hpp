#pragma once

#include <iosfwd>
#include <string>

#include "gammaflow/diagnostics.hpp"
#include "gammaflow/flow.hpp"
#include "gammaflow/profiles.hpp"

namespace gammaflow {

/// 17 significant decimal digits; doubles round-trip exactly.
std::string format_double(double x);

/// Grid metadata on a leading comment line, then x_1..x_n,u rows.
void write_patch_csv(std::ostream& os, const GraphPatch& patch);
GraphPatch read_patch_csv(std::istream& is);
GraphPatch read_patch_csv_file(const std::string& path);

/// x,u,du,ddu,lambda_rad,lambda_tan rows.
void write_profile_csv(std::ostream& os, const ProfileSolution& sol);

/// t,max_residual,max_abs_u, then one min-margin column per traced cone.
void write_flow_series_csv(std::ostream& os, const FlowRun& run);

/// Full per-point dump:
/// x...,residual,j,g,gtilde,aw_ratio,q2,angle_1..angle_n,identity_residual.
/// The identity column is NaN-filled when the data fails the translator gate.
void write_diagnostics_csv(std::ostream& os, const GraphPatch& patch,
                           const CurvatureSpec& spec);

std::string dichotomy_json(const DichotomyReport& rep);
std::string classification_json(const Classification& c, const CurvatureSpec& spec);

}  // namespace gammaflow
