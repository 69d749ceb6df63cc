#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lme/interpolate.hpp"

namespace lme {

/// One refinement level of an error study.
struct ErrorRow {
  Scalar h = 0;
  Scalar sup_err_value = 0;
  Scalar sup_err_grad = 0;
  Index n_points = 0;       // nodes in the level's point set
  Index probes = 0;         // probes that entered the sup
  Index skipped_probes = 0; // non-converged solves, excluded and counted
};

/// h-refinement error study results; rows sorted by decreasing h.
struct ErrorReport {
  std::vector<ErrorRow> rows;
  /// Least-squares slopes of log err against log h; empty when errors sit
  /// at the round-off floor or fewer than two usable levels remain.
  std::optional<Scalar> fitted_rate_value;
  std::optional<Scalar> fitted_rate_grad;
  Scalar epsilon_margin = 0;
  Scalar gamma = 0;
  int dim = 0;
  std::string field;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct StudyOptions {
  /// Probe lattice spacing is h / probe_divisor.
  Scalar probe_divisor = 3.0;
  Scalar jitter = 0.0;
  std::uint64_t seed = 0;
  /// Sup errors below floor_abs are treated as round-off; rates fitted on
  /// such data are reported as undefined.
  Scalar floor_abs = 1e-12;
};

/// Least-squares slope of log(err) vs log(h). Pairs with err <= 0 are
/// dropped; fewer than two survivors yields nullopt.
std::optional<Scalar> fit_rate(const std::vector<std::pair<Scalar, Scalar>>& pairs);

/// For each h: generate a point set, sample the field at the nodes, and
/// measure sup-norm value/gradient interpolation errors over a probe lattice
/// restricted to points with boundary margin >= epsilon*h.
ErrorReport error_study(const ScalarField& field, const Domain& domain,
                        std::vector<Scalar> h_list, Scalar epsilon,
                        const LmeParams& params_template,
                        const StudyOptions& opts = {});

}  // namespace lme
