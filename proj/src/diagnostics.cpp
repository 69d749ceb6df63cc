#include "lme/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "lme/study.hpp"

namespace lme {
namespace {

LmeParams with_all_nodes(const LmeParams& params) {
  LmeParams exact = params;
  exact.r_cut = std::numeric_limits<Scalar>::infinity();
  return exact;
}

Matrix offsets_of(const ShapeEval& ev, const Vector& x, const PointSet& p) {
  Matrix offs(p.dim(), static_cast<Index>(ev.node_ids.size()));
  for (Index k = 0; k < offs.cols(); ++k) {
    offs.col(k) = x - p.point(ev.node_ids[static_cast<size_t>(k)]);
  }
  return offs;
}

}  // namespace

ConsistencyReport check_consistency_suite(const PointSet& p,
                                          const LmeParams& params,
                                          const Matrix& probes,
                                          const ConsistencyOptions& opts) {
  ConsistencyReport rep;
  rep.probes = probes.cols();
  rep.tol_partition = 1e-12;
  rep.tol_first_moment = 1e-10 * params.h;
  rep.tol_gradient_sum = 1e-8 / params.h;
  rep.tol_gradient_moment = 1e-8;

  const int d = p.dim();
  for (Index c = 0; c < probes.cols(); ++c) {
    const Vector x = probes.col(c);
    ShapeEval ev;
    bool have_gradients = true;
    try {
      ev = shape_gradients(x, p, params);
    } catch (const SolveError&) {
      ++rep.failed_solves;
      continue;
    } catch (const std::runtime_error&) {  // degenerate J*
      have_gradients = false;
      ++rep.vacuous;
      try {
        ev = shape_values(x, p, params);
      } catch (const SolveError&) {
        ++rep.failed_solves;
        continue;
      }
    }
    Vector w = ev.weights;
    if (opts.inject_weight_error != 0 && w.size() > 0) {
      w[0] += opts.inject_weight_error;
    }
    const Matrix offs = offsets_of(ev, x, p);

    rep.worst_partition = std::max(rep.worst_partition, std::abs(w.sum() - 1.0));
    rep.worst_first_moment =
        std::max(rep.worst_first_moment, (offs * w).norm());
    if (have_gradients) {
      Matrix g = *ev.gradients;
      if (opts.inject_weight_error != 0 && g.cols() > 0) {
        g.col(0).array() += opts.inject_weight_error / params.h;
      }
      rep.worst_gradient_sum =
          std::max(rep.worst_gradient_sum, g.rowwise().sum().norm());
      // sum_a d_j w_a (x_a - x)_i = delta_ij  <=>  -g offs^T = I.
      const Matrix moment = -g * offs.transpose();
      rep.worst_gradient_moment =
          std::max(rep.worst_gradient_moment,
                   (moment - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
    }
  }
  rep.pass = rep.failed_solves == 0 &&
             rep.worst_partition <= rep.tol_partition &&
             rep.worst_first_moment <= rep.tol_first_moment &&
             rep.worst_gradient_sum <= rep.tol_gradient_sum &&
             rep.worst_gradient_moment <= rep.tol_gradient_moment;
  return rep;
}

DecayReport check_decay(const PointSet& p, const LmeParams& params, Scalar s,
                        const Matrix& probes) {
  if (!(s >= 1)) throw std::invalid_argument("check_decay: s must be >= 1");
  const LmeParams exact = with_all_nodes(params);
  DecayReport rep;
  rep.s = s;
  for (Index c = 0; c < probes.cols(); ++c) {
    const Vector x = probes.col(c);
    const ShapeEval ev = shape_gradients(x, p, exact);
    const Matrix offs = offsets_of(ev, x, p);
    for (Index k = 0; k < offs.cols(); ++k) {
      const Scalar t2 = offs.col(k).squaredNorm() / (params.h * params.h);
      const Scalar poly = std::pow(1.0 + t2, s);
      rep.measured_c = std::max(rep.measured_c, poly * ev.weights[k]);
      const Scalar dmax = ev.gradients->col(k).cwiseAbs().maxCoeff();
      rep.measured_c = std::max(rep.measured_c, poly * params.h * dmax);
    }
  }
  rep.per_h.emplace_back(params.h, rep.measured_c);
  return rep;
}

int check_concentration(const PointSet& p, const LmeParams& params,
                        Scalar theta, const Matrix& probes) {
  if (!(theta > 0)) throw std::invalid_argument("check_concentration: theta > 0");
  const LmeParams exact = with_all_nodes(params);
  int worst = 1;
  for (Index c = 0; c < probes.cols(); ++c) {
    const Vector x = probes.col(c);
    const ShapeEval ev = shape_values(x, p, exact);
    std::vector<std::pair<Scalar, Scalar>> by_dist;  // (dist/h, w)
    by_dist.reserve(ev.node_ids.size());
    for (size_t k = 0; k < ev.node_ids.size(); ++k) {
      by_dist.emplace_back((x - p.point(ev.node_ids[k])).norm() / params.h,
                           ev.weights[static_cast<Index>(k)]);
    }
    std::sort(by_dist.begin(), by_dist.end());
    // Suffix sums give the tail mass beyond each candidate radius.
    int rings = 1;
    while (true) {
      Scalar tail = 0;
      for (auto it = by_dist.rbegin(); it != by_dist.rend(); ++it) {
        if (it->first <= static_cast<Scalar>(rings)) break;
        tail += it->second;
      }
      if (tail <= theta) break;
      ++rings;
    }
    worst = std::max(worst, rings);
  }
  return worst;
}

const char* to_string(BoundReport::Kind k) {
  switch (k) {
    case BoundReport::Kind::kLambda: return "lambda";
    case BoundReport::Kind::kZLow: return "z_low";
    case BoundReport::Kind::kZHigh: return "z_high";
    case BoundReport::Kind::kJInv: return "jinv";
  }
  return "unknown";
}

std::vector<BoundReport> check_dual_bounds(const PointSet& p,
                                           const LmeParams& params,
                                           Scalar epsilon,
                                           const Matrix& probes) {
  if (probes.cols() == 0) {
    throw std::invalid_argument("check_dual_bounds: empty probe set");
  }
  Scalar sup_lambda = 0;
  Scalar min_z = std::numeric_limits<Scalar>::infinity();
  Scalar max_z = 0;
  Scalar sup_jinv = 0;
  for (Index c = 0; c < probes.cols(); ++c) {
    const Vector x = probes.col(c);
    const ShapeEval ev = shape_gradients(x, p, params);
    sup_lambda = std::max(sup_lambda, ev.dual.lambda_star.norm());
    const Scalar z = std::exp(ev.dual.log_z);
    min_z = std::min(min_z, z);
    max_z = std::max(max_z, z);
    const Scalar eig_min =
        Eigen::SelfAdjointEigenSolver<Matrix>(*ev.j_star).eigenvalues().minCoeff();
    sup_jinv = std::max(sup_jinv, 1.0 / eig_min);
  }
  const Scalar eps2 = std::min<Scalar>(epsilon, 1.0);
  return {
      {BoundReport::Kind::kLambda, sup_lambda, 1.0 / (eps2 * params.h)},
      {BoundReport::Kind::kZLow, min_z, 1.0},
      {BoundReport::Kind::kZHigh, max_z, 1.0},
      {BoundReport::Kind::kJInv, sup_jinv, 1.0 / (params.h * params.h)},
  };
}

Scalar closed_form_lambda_1d(Scalar x, Scalar a, Scalar h, Scalar gamma) {
  if (!(x > a && x < a + h)) {
    throw std::invalid_argument("closed_form_lambda_1d: x must lie in (a, a+h)");
  }
  return (std::log(a + h - x) - std::log(x - a)) / h +
         gamma / (h * h) * (2 * x - 2 * a - h);
}

void require_boundary_gap(const PointSet& p, const Domain& domain,
                          Scalar eta_h) {
  for (Index a = 0; a < p.size(); ++a) {
    const Scalar m = domain.boundary_margin(p.point(a));
    if (m > 1e-12 * std::max<Scalar>(1.0, domain.diameter()) && m < eta_h) {
      throw std::invalid_argument(
          "point set violates the boundary gap hypothesis: node " +
          std::to_string(a) + " sits at distance " + std::to_string(m) +
          " from the boundary, inside the forbidden band (0, " +
          std::to_string(eta_h) + ")");
    }
  }
}

BoundaryProbeReport boundary_scaling_probe(const Domain& domain, Index face,
                                           const PointSet& p,
                                           const LmeParams& params,
                                           std::vector<Scalar> rho_list,
                                           const BoundaryProbeOptions& opts) {
  const int d = domain.dim();
  if (d < 2) {
    throw std::invalid_argument("boundary_scaling_probe: needs dimension >= 2");
  }
  if (face < 0 || face >= static_cast<Index>(domain.faces().size())) {
    throw std::invalid_argument("boundary_scaling_probe: face index out of range");
  }
  const Scalar eta_h =
      (opts.eta > 0 ? opts.eta : 0.5 / std::sqrt(static_cast<Scalar>(d))) *
      params.h;
  require_boundary_gap(p, domain, eta_h);

  const Halfspace& f = domain.faces()[static_cast<size_t>(face)];
  // Base point: asymmetric anchor projected onto the face plane.
  Vector anchor = domain.bbox_lo() +
                  opts.face_param * (domain.bbox_hi() - domain.bbox_lo());
  Vector base = anchor - (f.normal.dot(anchor) - f.offset) * f.normal;
  for (size_t i = 0; i < domain.faces().size(); ++i) {
    if (static_cast<Index>(i) == face) continue;
    const Halfspace& g = domain.faces()[i];
    if (g.offset - g.normal.dot(base) < opts.min_face_clearance * params.h) {
      throw std::invalid_argument(
          "boundary_scaling_probe: probe base point too close to another face");
    }
  }

  const Vector inward = -f.normal;
  Matrix rot = Matrix::Identity(d, d);
  Vector v = inward - Vector::Unit(d, 0);
  if (v.norm() > 1e-12) {
    rot -= 2.0 / v.squaredNorm() * (v * v.transpose());
  }

  BoundaryProbeReport rep;
  rep.rotation = rot;
  rep.base_point = base;

  std::sort(rho_list.begin(), rho_list.end(), std::greater<>());
  const Scalar floor = 1e-6 * params.h;
  for (const Scalar rho : rho_list) {
    if (rho < floor) {
      ++rep.excluded_rhos;
      continue;
    }
    const Vector x = base + rho * inward;
    ShapeEval ev;
    try {
      ev = shape_gradients(x, p, params);
    } catch (const std::exception&) {
      ++rep.non_converged;
      continue;
    }
    const Vector lam_f = rot * ev.dual.lambda_star;
    const Matrix j_f = rot * (*ev.j_star) * rot.transpose();
    rep.rho_list.push_back(rho);
    rep.lambda1.push_back(lam_f[0]);
    rep.rho_lambda1.push_back(rho * lam_f[0]);
    rep.j11.push_back(j_f(0, 0));
    rep.j1j_max.push_back(j_f.row(0).tail(d - 1).cwiseAbs().maxCoeff());
    rep.b_min_eig.push_back(
        Eigen::SelfAdjointEigenSolver<Matrix>(j_f.bottomRightCorner(d - 1, d - 1))
            .eigenvalues()
            .minCoeff());
    rep.smallest_converged_rho = std::min(rep.smallest_converged_rho, rho);
  }

  std::vector<std::pair<Scalar, Scalar>> j11_pairs, j1j_pairs;
  for (size_t i = 0; i < rep.rho_list.size(); ++i) {
    j11_pairs.emplace_back(rep.rho_list[i], rep.j11[i]);
    j1j_pairs.emplace_back(rep.rho_list[i], rep.j1j_max[i]);
  }
  rep.j11_vs_rho = fit_rate(j11_pairs);
  rep.j1j_vs_rho = fit_rate(j1j_pairs);
  return rep;
}

Scalar far_node_gradient_check(const Domain& domain, const PointSet& p,
                               const LmeParams& params, Scalar r_multiple,
                               Scalar s, const Matrix& probes) {
  const LmeParams exact = with_all_nodes(params);
  const Scalar cutoff = r_multiple * params.h;
  Scalar worst = 0;
  for (Index c = 0; c < probes.cols(); ++c) {
    const Vector x = probes.col(c);
    const ShapeEval ev = shape_gradients(x, p, exact);
    for (size_t k = 0; k < ev.node_ids.size(); ++k) {
      const Vector x_a = p.point(ev.node_ids[k]);
      if (domain.boundary_margin(x_a) < cutoff) continue;
      const Scalar t2 = (x - x_a).squaredNorm() / (params.h * params.h);
      worst = std::max(worst,
                       std::pow(1.0 + t2, s) * params.h *
                           ev.gradients->col(static_cast<Index>(k)).norm());
    }
  }
  return worst;
}

}  // namespace lme
