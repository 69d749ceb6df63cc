#pragma once

#include <json.hpp>

#include "lme/config.hpp"
#include "lme/diagnostics.hpp"

namespace lme {

struct CheckResult {
  std::string check;
  bool pass = false;
  nlohmann::json params;
  nlohmann::json measured;

  nlohmann::json to_json() const {
    return {{"check", check}, {"params", params}, {"measured", measured},
            {"pass", pass}};
  }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  nlohmann::json config_echo;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  nlohmann::json to_json() const;
};

/// Runs the h-sweep verification suite: consistency identities, decay,
/// concentration, dual-solve bound uniformity, and the two-node closed-form
/// cross-check.
VerifyReport run_verification_suite(const RunConfig& cfg);

/// Smallest integer distance multiple R in [1, r_max] whose far-node
/// gradient check value is <= 1; r_max+1 when none qualifies.
int measure_far_node_threshold(const Domain& domain, const PointSet& p,
                               const LmeParams& params, Scalar s,
                               const Matrix& probes, int r_max = 8);

/// Probes stacked diagonally off each corner-like vertex of the domain, at
/// the given distances (in units of h) from the vertex.
Matrix near_vertex_probes(const Domain& domain, Scalar h,
                          const std::vector<Scalar>& offsets);

struct BoundarySuiteResult {
  BoundaryProbeReport probe;
  bool pass_j11_slope = false;
  bool pass_rho_lambda1 = false;
  bool pass_lambda1_monotone = false;
  bool pass_b_min_eig = false;
  bool pass_j1j = false;
  int far_node_r0 = 0;
  Scalar far_node_value_at_r0 = 0;
  bool pass_far_node = false;

  bool all_pass() const {
    return pass_j11_slope && pass_rho_lambda1 && pass_lambda1_monotone &&
           pass_b_min_eig && pass_j1j && pass_far_node;
  }
  nlohmann::json to_json() const;
};

/// Runs the near-boundary scaling assertions on one face of the domain at
/// h = cfg.h_list.front().
BoundarySuiteResult run_boundary_suite(const RunConfig& cfg);

}  // namespace lme
