#include "lme/verify.hpp"

#include <algorithm>
#include <cmath>

#include "lme/generate.hpp"
#include "lme/study.hpp"

namespace lme {
namespace {

// Ratio of each sweep value to the coarsest-h value, with tolerance band
// [1/factor, factor].
bool uniform_within(const std::vector<Scalar>& values, Scalar factor) {
  if (values.empty()) return false;
  const Scalar ref = values.front();
  if (!(ref > 0) || !std::isfinite(ref)) return false;
  for (const Scalar v : values) {
    if (!(v > 0) || !std::isfinite(v)) return false;
    const Scalar ratio = v / ref;
    if (ratio < 1.0 / factor || ratio > factor) return false;
  }
  return true;
}

PointSet two_node_set(Scalar a, Scalar h) {
  Matrix pts(1, 2);
  pts << a, a + h;
  return PointSet(pts);
}

CheckResult closed_form_check(const RunConfig& cfg) {
  CheckResult res;
  res.check = "closed_form_1d";
  Scalar worst_lambda = 0, worst_weight = 0;
  for (const auto& [a, h] : std::vector<std::pair<Scalar, Scalar>>{
           {0.0, 1.0}, {0.3, 0.4}}) {
    const PointSet nodes = two_node_set(a, h);
    LmeParams params = cfg.params_at(h);
    for (int k = 1; k <= 20; ++k) {
      const Scalar x = a + h * static_cast<Scalar>(k) / 21.0;
      Vector xv(1);
      xv << x;
      const ShapeEval ev = shape_values(xv, nodes, params);
      const Scalar reference = closed_form_lambda_1d(x, a, h, cfg.gamma);
      worst_lambda = std::max(
          worst_lambda, std::abs(ev.dual.lambda_star[0] - reference) * h);
      // Two-node weights are the hat functions.
      Vector hat(2);
      hat << (a + h - x) / h, (x - a) / h;
      for (size_t i = 0; i < ev.node_ids.size(); ++i) {
        worst_weight = std::max(
            worst_weight,
            std::abs(ev.weights[static_cast<Index>(i)] - hat[ev.node_ids[i]]));
      }
    }
  }
  res.params = {{"points", 20}, {"gamma", cfg.gamma}};
  res.measured = {{"max_lambda_err_times_h", worst_lambda},
                  {"max_weight_err", worst_weight}};
  res.pass = worst_lambda <= 1e-8 && worst_weight <= 1e-10;
  return res;
}

}  // namespace

VerifyReport run_verification_suite(const RunConfig& cfg) {
  if (cfg.h_list.empty()) throw std::invalid_argument("verify: empty h list");
  VerifyReport report;
  report.config_echo = cfg.echo();

  const Domain domain = cfg.domain();

  struct Level {
    Scalar h;
    PointSet nodes;
    Matrix probes;
  };
  std::vector<Level> levels;
  for (size_t i = 0; i < cfg.h_list.size(); ++i) {
    const Scalar h = cfg.h_list[i];
    PointSet nodes = generate_grid_points(domain, h, cfg.jitter,
                                          cfg.seed + static_cast<std::uint64_t>(i));
    Matrix probes = random_interior_probes(
        domain, cfg.probes, cfg.epsilon * h,
        cfg.seed + 1000 + static_cast<std::uint64_t>(i));
    levels.push_back({h, std::move(nodes), std::move(probes)});
  }

  // Consistency identities at every level.
  {
    CheckResult res;
    res.check = "consistency";
    res.pass = true;
    ConsistencyOptions opts;
    if (cfg.inject_fault) opts.inject_weight_error = 1e-6;
    nlohmann::json rows = nlohmann::json::array();
    for (const Level& lv : levels) {
      const auto rep = check_consistency_suite(lv.nodes, cfg.params_at(lv.h),
                                               lv.probes, opts);
      rows.push_back({{"h", lv.h},
                      {"worst_partition", rep.worst_partition},
                      {"worst_first_moment", rep.worst_first_moment},
                      {"worst_gradient_sum", rep.worst_gradient_sum},
                      {"worst_gradient_moment", rep.worst_gradient_moment},
                      {"vacuous", rep.vacuous},
                      {"pass", rep.pass}});
      res.pass = res.pass && rep.pass;
    }
    res.params = {{"probes", cfg.probes}, {"fault_injected", cfg.inject_fault}};
    res.measured = {{"levels", rows}};
    report.checks.push_back(std::move(res));
  }

  // Polynomial-decay constant, stable across the sweep. Jittered levels
  // carry independent realizations, so the band is wider than the clean
  // lattice case warrants.
  {
    CheckResult res;
    res.check = "decay";
    std::vector<Scalar> values;
    nlohmann::json rows = nlohmann::json::array();
    for (const Level& lv : levels) {
      const auto rep = check_decay(lv.nodes, cfg.params_at(lv.h), cfg.s, lv.probes);
      values.push_back(rep.measured_c);
      rows.push_back({{"h", lv.h}, {"measured_c", rep.measured_c}});
    }
    res.params = {{"s", cfg.s}, {"uniformity_factor", 2.0}};
    res.measured = {{"per_h", rows}};
    res.pass = uniform_within(values, 2.0);
    report.checks.push_back(std::move(res));
  }

  // Concentration radius, h-independent within one ring.
  {
    CheckResult res;
    res.check = "concentration";
    std::vector<int> values;
    nlohmann::json rows = nlohmann::json::array();
    for (const Level& lv : levels) {
      const int c = check_concentration(lv.nodes, cfg.params_at(lv.h), cfg.theta,
                                        lv.probes);
      values.push_back(c);
      rows.push_back({{"h", lv.h}, {"c_theta", c}});
    }
    res.params = {{"theta", cfg.theta}};
    res.measured = {{"per_h", rows}};
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    res.pass = !values.empty() && *mx - *mn <= 1;
    report.checks.push_back(std::move(res));
  }

  // Dual-solve bounds, uniform under refinement. On symmetric lattices the
  // optimal multiplier sits at the round-off floor, where a ratio test is
  // meaningless noise; values that small satisfy the bound outright.
  {
    CheckResult res;
    res.check = "dual_bounds";
    res.pass = true;
    constexpr Scalar kLambdaFloor = 0.01;
    std::vector<std::vector<Scalar>> by_kind(4);
    std::vector<BoundReport::Kind> kinds;
    nlohmann::json rows = nlohmann::json::array();
    for (const Level& lv : levels) {
      const auto bounds =
          check_dual_bounds(lv.nodes, cfg.params_at(lv.h), cfg.epsilon, lv.probes);
      nlohmann::json row = {{"h", lv.h}};
      kinds.clear();
      for (size_t k = 0; k < bounds.size(); ++k) {
        by_kind[k].push_back(bounds[k].normalized());
        kinds.push_back(bounds[k].kind);
        row[to_string(bounds[k].kind)] = {{"measured", bounds[k].measured},
                                          {"normalized", bounds[k].normalized()}};
      }
      rows.push_back(std::move(row));
    }
    for (size_t k = 0; k < by_kind.size(); ++k) {
      const auto& series = by_kind[k];
      bool ok = uniform_within(series, 2.0);
      if (!ok && kinds[k] == BoundReport::Kind::kLambda) {
        ok = std::all_of(series.begin(), series.end(),
                         [](Scalar v) { return v <= kLambdaFloor; });
      }
      res.pass = res.pass && ok;
    }
    res.params = {{"epsilon", cfg.epsilon},
                  {"uniformity_factor", 2.0},
                  {"lambda_floor", kLambdaFloor}};
    res.measured = {{"per_h", rows}};
    report.checks.push_back(std::move(res));
  }

  report.checks.push_back(closed_form_check(cfg));
  return report;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["config"] = config_echo;
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back(c.to_json());
  j["pass"] = all_pass();
  return j;
}

int measure_far_node_threshold(const Domain& domain, const PointSet& p,
                               const LmeParams& params, Scalar s,
                               const Matrix& probes, int r_max) {
  for (int r = 1; r <= r_max; ++r) {
    const Scalar value = far_node_gradient_check(domain, p, params,
                                                 static_cast<Scalar>(r), s, probes);
    if (value <= 1.0) return r;
  }
  return r_max + 1;
}

Matrix near_vertex_probes(const Domain& domain, Scalar h,
                          const std::vector<Scalar>& offsets) {
  const Matrix& verts = domain.vertices();
  const Vector center = 0.5 * (domain.bbox_lo() + domain.bbox_hi());
  Matrix probes(domain.dim(), verts.cols() * static_cast<Index>(offsets.size()));
  Index c = 0;
  for (Index v = 0; v < verts.cols(); ++v) {
    const Vector dir = (center - verts.col(v)).normalized();
    for (const Scalar t : offsets) {
      probes.col(c++) = verts.col(v) + t * h * dir;
    }
  }
  return probes;
}

BoundarySuiteResult run_boundary_suite(const RunConfig& cfg) {
  if (cfg.h_list.empty()) throw std::invalid_argument("boundary: empty h list");
  const Scalar h = cfg.h_list.front();
  const Domain domain = cfg.domain();
  const PointSet nodes = generate_grid_points(domain, h, cfg.jitter, cfg.seed);
  const LmeParams params = cfg.params_at(h);

  std::vector<Scalar> rho_list = cfg.rho_list;
  if (rho_list.empty()) {
    const int n = 12;
    const Scalar hi = 0.5 * h, lo = 1e-3 * h;
    for (int i = 0; i < n; ++i) {
      rho_list.push_back(hi * std::pow(lo / hi, static_cast<Scalar>(i) / (n - 1)));
    }
  }

  BoundarySuiteResult res;
  res.probe = boundary_scaling_probe(domain, cfg.boundary_face, nodes, params,
                                     rho_list);
  const auto& pr = res.probe;
  const size_t n = pr.rho_list.size();

  res.pass_j11_slope =
      pr.j11_vs_rho && *pr.j11_vs_rho >= 0.8 && *pr.j11_vs_rho <= 1.2;

  if (n >= 3) {
    // rho*lambda1 may rise over the first few rows; past its peak it must
    // fall off and end below 0.1.
    const size_t peak = static_cast<size_t>(
        std::max_element(pr.rho_lambda1.begin(), pr.rho_lambda1.end()) -
        pr.rho_lambda1.begin());
    bool falling = true;
    for (size_t i = peak + 1; i < n; ++i) {
      falling = falling && pr.rho_lambda1[i] <=
                               pr.rho_lambda1[i - 1] +
                                   1e-9 * std::abs(pr.rho_lambda1[i - 1]);
    }
    res.pass_rho_lambda1 = falling && pr.rho_lambda1.back() < 0.1;

    bool rising = true;
    for (size_t i = 1; i < n; ++i) {
      rising = rising &&
               pr.lambda1[i] >= pr.lambda1[i - 1] - 1e-9 * std::abs(pr.lambda1[i - 1]);
    }
    res.pass_lambda1_monotone = rising;

    bool stable = pr.b_min_eig.front() > 0;
    for (const Scalar b : pr.b_min_eig) {
      stable = stable && b >= 0.25 * pr.b_min_eig.front();
    }
    res.pass_b_min_eig = stable;

    const Scalar j1j_floor = 1e-14 * h * h;
    const bool all_tiny = std::all_of(pr.j1j_max.begin(), pr.j1j_max.end(),
                                      [&](Scalar v) { return v <= j1j_floor; });
    res.pass_j1j = all_tiny || (pr.j1j_vs_rho && *pr.j1j_vs_rho >= 0.25);
  }

  const Matrix corner_probes = near_vertex_probes(domain, h, {0.15, 0.35, 0.6});
  res.far_node_r0 =
      measure_far_node_threshold(domain, nodes, params, 2.0, corner_probes);
  res.far_node_value_at_r0 = far_node_gradient_check(
      domain, nodes, params, static_cast<Scalar>(res.far_node_r0), 2.0,
      corner_probes);
  res.pass_far_node = res.far_node_r0 <= 8 && res.far_node_value_at_r0 <= 1.0;
  return res;
}

nlohmann::json BoundarySuiteResult::to_json() const {
  nlohmann::json j;
  j["rho_list"] = probe.rho_list;
  j["lambda1"] = probe.lambda1;
  j["rho_lambda1"] = probe.rho_lambda1;
  j["j11"] = probe.j11;
  j["j1j_max"] = probe.j1j_max;
  j["b_min_eig"] = probe.b_min_eig;
  j["j11_vs_rho"] =
      probe.j11_vs_rho ? nlohmann::json(*probe.j11_vs_rho) : nlohmann::json();
  j["j1j_vs_rho"] =
      probe.j1j_vs_rho ? nlohmann::json(*probe.j1j_vs_rho) : nlohmann::json();
  auto& rot = j["rotation"] = nlohmann::json::array();
  for (Index i = 0; i < probe.rotation.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index k = 0; k < probe.rotation.cols(); ++k) {
      row.push_back(probe.rotation(i, k));
    }
    rot.push_back(std::move(row));
  }
  j["base_point"] = std::vector<Scalar>(
      probe.base_point.data(), probe.base_point.data() + probe.base_point.size());
  j["smallest_converged_rho"] = probe.smallest_converged_rho;
  j["non_converged"] = probe.non_converged;
  j["far_node_r0"] = far_node_r0;
  j["far_node_value_at_r0"] = far_node_value_at_r0;
  j["checks"] = {{"j11_slope", pass_j11_slope},
                 {"rho_lambda1", pass_rho_lambda1},
                 {"lambda1_monotone", pass_lambda1_monotone},
                 {"b_min_eig", pass_b_min_eig},
                 {"j1j", pass_j1j},
                 {"far_node", pass_far_node}};
  j["pass"] = all_pass();
  return j;
}

}  // namespace lme
