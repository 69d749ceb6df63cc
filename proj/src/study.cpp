#include "lme/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lme/generate.hpp"

namespace lme {

std::optional<Scalar> fit_rate(const std::vector<std::pair<Scalar, Scalar>>& pairs) {
  std::vector<std::pair<Scalar, Scalar>> logs;
  for (const auto& [h, err] : pairs) {
    if (err > 0 && std::isfinite(err) && h > 0) {
      logs.emplace_back(std::log(h), std::log(err));
    }
  }
  if (logs.size() < 2) return std::nullopt;
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [lx, ly] : logs) {
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const auto n = static_cast<Scalar>(logs.size());
  const Scalar denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

ErrorReport error_study(const ScalarField& field, const Domain& domain,
                        std::vector<Scalar> h_list, Scalar epsilon,
                        const LmeParams& params_template,
                        const StudyOptions& opts) {
  if (h_list.empty()) throw std::invalid_argument("error_study: empty h list");
  if (!field.has_gradient()) {
    throw std::invalid_argument("error_study: field needs a gradient");
  }
  std::sort(h_list.begin(), h_list.end(), std::greater<>());

  ErrorReport report;
  report.epsilon_margin = epsilon;
  report.gamma = params_template.gamma;
  report.dim = domain.dim();
  report.field = field.name;

  for (const Scalar h : h_list) {
    LmeParams params = params_template;
    params.h = h;
    const PointSet nodes = generate_grid_points(domain, h, opts.jitter, opts.seed);

    Vector samples(nodes.size());
    for (Index a = 0; a < nodes.size(); ++a) samples[a] = field.value(nodes.point(a));

    const Matrix probes =
        lattice_probes(domain, h / opts.probe_divisor, epsilon * h);
    if (probes.cols() == 0) {
      throw std::invalid_argument(
          "error_study: margin " + std::to_string(epsilon * h) +
          " leaves no probes; shrink epsilon or h");
    }

    ErrorRow row;
    row.h = h;
    row.n_points = nodes.size();
    for (Index c = 0; c < probes.cols(); ++c) {
      const Vector x = probes.col(c);
      try {
        const ShapeEval ev = shape_gradients(x, nodes, params);
        Scalar value = 0;
        Vector grad = Vector::Zero(domain.dim());
        for (size_t k = 0; k < ev.node_ids.size(); ++k) {
          const Scalar s = samples[ev.node_ids[k]];
          value += s * ev.weights[static_cast<Index>(k)];
          grad += s * ev.gradients->col(static_cast<Index>(k));
        }
        row.sup_err_value =
            std::max(row.sup_err_value, std::abs(value - field.value(x)));
        row.sup_err_grad =
            std::max(row.sup_err_grad, (grad - field.gradient(x)).norm());
        ++row.probes;
      } catch (const SolveError&) {
        ++row.skipped_probes;
      }
    }
    report.rows.push_back(row);
  }

  std::vector<std::pair<Scalar, Scalar>> vp, gp;
  bool above_floor_v = false, above_floor_g = false;
  for (const ErrorRow& r : report.rows) {
    vp.emplace_back(r.h, r.sup_err_value);
    gp.emplace_back(r.h, r.sup_err_grad);
    above_floor_v = above_floor_v || r.sup_err_value > opts.floor_abs;
    above_floor_g = above_floor_g || r.sup_err_grad > opts.floor_abs;
  }
  if (above_floor_v) report.fitted_rate_value = fit_rate(vp);
  if (above_floor_g) report.fitted_rate_grad = fit_rate(gp);
  return report;
}

nlohmann::json ErrorReport::to_json() const {
  nlohmann::json j;
  j["epsilon"] = epsilon_margin;
  j["gamma"] = gamma;
  j["dim"] = dim;
  j["field"] = field;
  auto& out_rows = j["rows"] = nlohmann::json::array();
  for (const ErrorRow& r : rows) {
    out_rows.push_back({{"h", r.h},
                        {"err_value", r.sup_err_value},
                        {"err_grad", r.sup_err_grad},
                        {"n_points", r.n_points},
                        {"probes", r.probes},
                        {"skipped_probes", r.skipped_probes}});
  }
  j["rates"]["value"] =
      fitted_rate_value ? nlohmann::json(*fitted_rate_value) : nlohmann::json();
  j["rates"]["grad"] =
      fitted_rate_grad ? nlohmann::json(*fitted_rate_grad) : nlohmann::json();
  return j;
}

std::string ErrorReport::to_csv() const {
  std::ostringstream out;
  out << "h,err_value,err_grad\n";
  char buf[128];
  for (const ErrorRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r.h, r.sup_err_value,
                  r.sup_err_grad);
    out << buf;
  }
  return out.str();
}

}  // namespace lme
