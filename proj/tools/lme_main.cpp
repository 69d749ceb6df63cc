// Command-line front end: point-set generation, single-point evaluation,
// verification suite, convergence studies, and boundary probes.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "lme/config.hpp"
#include "lme/generate.hpp"
#include "lme/io.hpp"
#include "lme/study.hpp"
#include "lme/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;

struct Flags {
  std::string config_path;
  std::optional<double> gamma, h, epsilon, jitter, theta, s;
  std::optional<std::uint64_t> seed;
  std::optional<int> dim, probes, face;
  std::optional<std::string> out, field, h_list, rho_list;
  bool quiet = false;
  bool inject_fault = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->set_help_flag("--help", "print help");
  cmd->add_option("--config", f.config_path, "flat key = value config file");
  cmd->add_option("--gamma", f.gamma, "dimensionless width parameter");
  cmd->add_option("--h", f.h, "point-set spacing (sets a one-entry h list)");
  cmd->add_option("--h-list", f.h_list, "comma-separated h sweep");
  cmd->add_option("--dim", f.dim, "spatial dimension (1..3)");
  cmd->add_option("--seed", f.seed, "seed for all randomness");
  cmd->add_option("--epsilon", f.epsilon, "interior margin in units of h");
  cmd->add_option("--jitter", f.jitter, "lattice jitter in [0, 0.5)");
  cmd->add_option("--theta", f.theta, "concentration tail threshold");
  cmd->add_option("--s", f.s, "polynomial decay exponent");
  cmd->add_option("--probes", f.probes, "probe count per configuration");
  cmd->add_option("--out", f.out, "output path for the JSON report");
  cmd->add_flag("--quiet", f.quiet, "suppress progress lines");
}

lme::RunConfig resolve(const Flags& f) {
  lme::RunConfig cfg;
  if (!f.config_path.empty()) cfg = lme::RunConfig::from_file(f.config_path);
  if (f.gamma) cfg.gamma = *f.gamma;
  if (f.h) cfg.h_list = {*f.h};
  if (f.h_list) cfg.h_list = lme::parse_scalar_list(*f.h_list);
  if (f.dim) cfg.dim = *f.dim;
  if (f.seed) cfg.seed = *f.seed;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.jitter) cfg.jitter = *f.jitter;
  if (f.theta) cfg.theta = *f.theta;
  if (f.s) cfg.s = *f.s;
  if (f.probes) cfg.probes = *f.probes;
  if (f.out) cfg.out = *f.out;
  if (f.field) cfg.field = *f.field;
  if (f.face) cfg.boundary_face = *f.face;
  if (f.rho_list) cfg.rho_list = lme::parse_scalar_list(*f.rho_list);
  if (f.quiet) cfg.quiet = true;
  if (f.inject_fault) cfg.inject_fault = true;
  return cfg;
}

void emit(const json& report, const lme::RunConfig& cfg) {
  if (cfg.out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    lme::write_text_file(cfg.out, report.dump(2) + "\n");
    if (!cfg.quiet) std::cout << "report written to " << cfg.out << "\n";
  }
}

int cmd_gen(const lme::RunConfig& cfg) {
  if (cfg.h_list.empty()) throw lme::IoError("gen: need --h");
  const lme::PointSet nodes = lme::generate_grid_points(
      cfg.domain(), cfg.h_list.front(), cfg.jitter, cfg.seed);
  const std::string path = cfg.out.empty() ? "points.csv" : cfg.out;
  lme::write_pointset(nodes, path);
  if (!cfg.quiet) {
    std::cout << nodes.size() << " points written to " << path << "\n";
  }
  return kExitPass;
}

int cmd_eval(const lme::RunConfig& cfg, const std::string& points_path,
             const std::string& x_text) {
  if (cfg.h_list.empty()) throw lme::IoError("eval: need --h");
  const lme::PointSet nodes = lme::read_pointset(points_path);
  const std::vector<lme::Scalar> coords = lme::parse_scalar_list(x_text);
  if (static_cast<int>(coords.size()) != nodes.dim()) {
    throw lme::IoError("eval: x needs " + std::to_string(nodes.dim()) +
                       " comma-separated coordinates");
  }
  lme::Vector x(nodes.dim());
  for (int j = 0; j < nodes.dim(); ++j) x[j] = coords[static_cast<size_t>(j)];

  const lme::ShapeEval ev =
      lme::shape_gradients(x, nodes, cfg.params_at(cfg.h_list.front()));

  json j;
  j["config"] = cfg.echo();
  j["node_ids"] = ev.node_ids;
  j["weights"] = std::vector<lme::Scalar>(ev.weights.begin(), ev.weights.end());
  auto& grads = j["gradients"] = json::array();
  for (lme::Index k = 0; k < ev.gradients->cols(); ++k) {
    grads.push_back(std::vector<lme::Scalar>(
        ev.gradients->col(k).begin(), ev.gradients->col(k).end()));
  }
  j["lambda_star"] = std::vector<lme::Scalar>(ev.dual.lambda_star.begin(),
                                              ev.dual.lambda_star.end());
  j["log_z"] = ev.dual.log_z;
  j["iters"] = ev.dual.iters;
  j["status"] = lme::to_string(ev.dual.status);
  emit(j, cfg);
  return kExitPass;
}

int cmd_verify(const lme::RunConfig& cfg) {
  const lme::VerifyReport report = lme::run_verification_suite(cfg);
  if (!cfg.quiet) {
    for (const auto& c : report.checks) {
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.check << "\n";
    }
  }
  emit(report.to_json(), cfg);
  return report.all_pass() ? kExitPass : kExitCheckFailed;
}

int cmd_converge(const lme::RunConfig& cfg) {
  const lme::ScalarField field = lme::make_field(cfg.field, cfg.dim);
  lme::StudyOptions opts;
  opts.jitter = cfg.jitter;
  opts.seed = cfg.seed;
  const lme::ErrorReport report = lme::error_study(
      field, cfg.domain(), cfg.h_list, cfg.epsilon,
      cfg.params_at(cfg.h_list.empty() ? 1.0 : cfg.h_list.front()), opts);

  json j = report.to_json();
  j["config"] = cfg.echo();

  const std::string base = cfg.out.empty()
                               ? "converge_" + cfg.field + "_" +
                                     std::to_string(cfg.dim) + "d.json"
                               : cfg.out;
  lme::RunConfig out_cfg = cfg;
  out_cfg.out = base;
  emit(j, out_cfg);
  std::filesystem::path csv_path(base);
  csv_path.replace_extension(".csv");
  lme::write_text_file(csv_path, report.to_csv());

  bool ok = true;
  if (report.fitted_rate_value) {
    ok = ok && *report.fitted_rate_value >= cfg.rate_value_min &&
         *report.fitted_rate_value <= cfg.rate_value_max;
  }
  if (report.fitted_rate_grad) {
    ok = ok && *report.fitted_rate_grad >= cfg.rate_grad_min &&
         *report.fitted_rate_grad <= cfg.rate_grad_max;
  }
  if (!cfg.quiet) {
    auto show = [](const std::optional<lme::Scalar>& r) {
      return r ? std::to_string(*r) : std::string("undefined (round-off)");
    };
    std::cout << "rate_value = " << show(report.fitted_rate_value)
              << ", rate_grad = " << show(report.fitted_rate_grad) << "\n";
  }
  return ok ? kExitPass : kExitCheckFailed;
}

int cmd_boundary(const lme::RunConfig& cfg) {
  const lme::BoundarySuiteResult res = lme::run_boundary_suite(cfg);
  json j = res.to_json();
  j["config"] = cfg.echo();
  if (!cfg.quiet) {
    for (const auto& [name, pass] : j["checks"].items()) {
      std::cout << (pass.get<bool>() ? "[PASS] " : "[FAIL] ") << name << "\n";
    }
  }
  emit(j, cfg);
  return res.all_pass() ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local maximum-entropy meshfree approximation toolkit"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  Flags gen_f, eval_f, verify_f, conv_f, bnd_f;
  std::string points_path, x_text;

  CLI::App* gen = app.add_subcommand("gen", "generate a lattice point set");
  add_common(gen, gen_f);

  CLI::App* eval = app.add_subcommand("eval", "evaluate shape functions at a point");
  add_common(eval, eval_f);
  eval->add_option("--points", points_path, "point-set file (csv or json)")
      ->required();
  eval->add_option("--x", x_text, "evaluation point, comma-separated")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify, verify_f);
  verify->add_flag("--inject-fault", verify_f.inject_fault,
                   "test hook: corrupt weights to force a failure");

  CLI::App* converge = app.add_subcommand("converge", "h-refinement error study");
  add_common(converge, conv_f);
  converge->add_option("--field", conv_f.field,
                       "built-in field: affine, quadratic, sinusoid, gaussian-bump");

  CLI::App* boundary = app.add_subcommand("boundary", "near-face scaling probes");
  add_common(boundary, bnd_f);
  boundary->add_option("--face", bnd_f.face, "face index of the domain");
  boundary->add_option("--rho-list", bnd_f.rho_list,
                       "comma-separated distances to the face");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(resolve(gen_f));
    if (eval->parsed()) return cmd_eval(resolve(eval_f), points_path, x_text);
    if (verify->parsed()) return cmd_verify(resolve(verify_f));
    if (converge->parsed()) return cmd_converge(resolve(conv_f));
    if (boundary->parsed()) return cmd_boundary(resolve(bnd_f));
    return kExitIo;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  } catch (const lme::SolveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const lme::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
