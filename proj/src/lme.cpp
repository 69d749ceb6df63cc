#include "lme/lme.hpp"

#include <cmath>

namespace lme {
namespace {

constexpr Scalar kDegenerateRatio = 1e-14;

// Ascent direction from the d x d Hessian: the Newton step where J has
// curvature, dropping degenerate eigendirections. Returns false and hands
// back the raw residual direction when the curvature is too small to
// invert. `degenerate` flags a Hessian that is singular at the natural
// h^2 scale.
bool newton_direction(const Matrix& j, const Vector& r, Scalar h_sq,
                      Vector& step, bool& degenerate) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(j);
  const Scalar emin = eig.eigenvalues().minCoeff();
  const Scalar emax = eig.eigenvalues().maxCoeff();
  degenerate = !(emin > kDegenerateRatio * h_sq) || emax / emin > 1e14;
  if (emax > 0) {
    Vector inv = eig.eigenvalues();
    for (Index k = 0; k < inv.size(); ++k) {
      inv[k] = inv[k] > emax * kDegenerateRatio ? 1.0 / inv[k] : 0.0;
    }
    step =
        eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose() * r;
    if (step.allFinite()) return true;
  }
  step = r;
  return false;
}

struct ActiveEval {
  std::vector<Index> ids;
  Matrix offsets;  // column a holds x - x_a
  Vector weights;
  Scalar log_z = 0;
};

// Normalized exponential weights over the active set at (x, lambda),
// shifted by the max exponent before exponentiating.
ActiveEval eval_weights(const Vector& x, const Vector& lambda,
                        const PointSet& p, const LmeParams& params) {
  ActiveEval ev;
  ev.ids = p.radius_query(x, params.cutoff_radius());
  if (ev.ids.empty()) {
    throw std::runtime_error("no nodes in range of evaluation point");
  }
  const auto n = static_cast<Index>(ev.ids.size());
  const Scalar beta = params.beta();

  ev.offsets.resize(p.dim(), n);
  Vector expo(n);
  for (Index k = 0; k < n; ++k) {
    ev.offsets.col(k) = x - p.point(ev.ids[static_cast<size_t>(k)]);
    expo[k] = -beta * ev.offsets.col(k).squaredNorm() + lambda.dot(ev.offsets.col(k));
  }
  const Scalar shift = expo.maxCoeff();
  ev.weights = (expo.array() - shift).exp();
  const Scalar total = ev.weights.sum();
  ev.log_z = shift + std::log(total);
  ev.weights /= total;
  return ev;
}

LogPartition derivatives_at(const ActiveEval& ev) {
  LogPartition out;
  out.log_z = ev.log_z;
  out.r = ev.offsets * ev.weights;
  // Centered form of sum_a w_a off_a off_a^T - r r^T; the uncentered
  // difference cancels catastrophically once one weight dominates.
  const Matrix centered = ev.offsets.colwise() - out.r;
  out.j = centered * ev.weights.asDiagonal() * centered.transpose();
  return out;
}

ShapeEval finish_shape_eval(ActiveEval ev, DualSolution dual) {
  ShapeEval out;
  out.node_ids = std::move(ev.ids);
  out.weights = std::move(ev.weights);
  out.dual = std::move(dual);
  return out;
}

}  // namespace

Scalar LmeParams::cutoff_multiplier() const {
  if (r_cut != 0) return r_cut;
  // exp(-gamma * m^2) < 1e-16, floored to keep nearest neighbors active.
  const Scalar m = std::sqrt(std::log(1e16) / gamma) * (1.0 + 1e-9);
  return std::max<Scalar>(1.25, m);
}

void LmeParams::validate() const {
  if (!(gamma > 0)) throw std::invalid_argument("params: gamma must be > 0");
  if (!(h > 0)) throw std::invalid_argument("params: h must be > 0");
  if (!(newton_tol > 0)) throw std::invalid_argument("params: newton_tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("params: max_iters must be >= 1");
  if (!(r_cut == 0 || r_cut > 1)) {
    throw std::invalid_argument("params: r_cut must be > 1 (or 0 for default)");
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIters: return "max_iters";
    case SolveStatus::kOutsideHull: return "outside_hull";
  }
  return "unknown";
}

LogPartition log_partition(const Vector& x, const Vector& lambda,
                           const PointSet& p, const LmeParams& params) {
  params.validate();
  return derivatives_at(eval_weights(x, lambda, p, params));
}

DualSolution solve_dual(const Vector& x, const PointSet& p,
                        const LmeParams& params) {
  params.validate();
  const int d = p.dim();
  const Scalar tol = params.newton_tol / params.h;

  DualSolution best;
  best.lambda_star = Vector::Zero(d);

  Vector lambda = Vector::Zero(d);
  LogPartition cur = log_partition(x, lambda, p, params);

  for (int iter = 0; iter <= params.max_iters; ++iter) {
    const Scalar r_norm = cur.r.norm();
    if (r_norm < best.r_norm) {
      best.lambda_star = lambda;
      best.log_z = cur.log_z;
      best.r_norm = r_norm;
      best.iters = iter;
    }
    if (r_norm <= tol) {
      // The threshold is a ceiling, not a target: a couple of quadratic
      // polish steps push the residual to its round-off floor, which the
      // consistency identities downstream rely on.
      for (int extra = 0; extra < 3 && cur.r.norm() > 0; ++extra) {
        Vector pstep;
        bool pdeg = false;
        newton_direction(cur.j, cur.r, params.h * params.h, pstep, pdeg);
        if (pdeg) break;
        LogPartition next = log_partition(x, lambda - pstep, p, params);
        if (!(next.r.norm() < cur.r.norm())) break;
        lambda -= pstep;
        cur = std::move(next);
      }
      if (cur.r.norm() < best.r_norm) {
        best.lambda_star = lambda;
        best.log_z = cur.log_z;
        best.r_norm = cur.r.norm();
      }
      best.status = SolveStatus::kConverged;
      return best;
    }
    if (iter == params.max_iters) break;

    // Numerically singular relative to the natural h^2 scale of J; the
    // plain condition number cannot see a uniformly vanishing Hessian.
    Vector step;
    bool singular = false;
    const bool curved =
        newton_direction(cur.j, cur.r, params.h * params.h, step, singular);
    if (singular && lambda.norm() * params.h > 1e3) {
      best.status = SolveStatus::kOutsideHull;
      return best;
    }

    // The multiplier lives on the 1/h scale; capping the step keeps the
    // line search inside 30 halvings when a nearly flat objective produces
    // astronomical Newton steps. With no usable curvature the residual
    // direction marches at full cap length instead. stableNorm: the step
    // can overflow a squared norm long before the solve is hopeless.
    const Scalar cap = 100.0 / params.h;
    if (!curved) {
      step = cur.r.stableNormalized() * cap;
    } else {
      const Scalar step_len = step.stableNorm();
      if (!std::isfinite(step_len)) {
        step = cur.r.stableNormalized() * cap;
      } else if (step_len > cap) {
        step *= cap / step_len;
      }
    }

    // Backtracking on log Z. Near the optimum the objective decrease drops
    // below double resolution while the residual is still shrinking
    // quadratically, so a residual drop is also accepted, but only when the
    // objective is flat at working precision.
    const Scalar flat = 8 * std::numeric_limits<Scalar>::epsilon() *
                        (1.0 + std::abs(cur.log_z));
    Scalar t = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= 30; ++halvings) {
      const Vector cand = lambda - t * step;
      LogPartition next = log_partition(x, cand, p, params);
      const bool objective_drop = next.log_z < cur.log_z;
      const bool residual_drop = halvings == 0 && next.r.norm() < r_norm &&
                                 next.log_z <= cur.log_z + flat;
      if (objective_drop || residual_drop) {
        lambda = cand;
        cur = std::move(next);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // at the numerical floor of the objective
  }
  best.status = SolveStatus::kMaxIters;
  return best;
}

ShapeEval shape_values(const Vector& x, const PointSet& p,
                       const LmeParams& params) {
  DualSolution dual = solve_dual(x, p, params);
  if (dual.status != SolveStatus::kConverged) {
    throw SolveError(dual.status,
                     dual.status == SolveStatus::kOutsideHull
                         ? "dual solve diverged: point outside the convex "
                           "hull of the active nodes"
                         : "dual solve did not converge");
  }
  ActiveEval act = eval_weights(x, dual.lambda_star, p, params);
  return finish_shape_eval(std::move(act), std::move(dual));
}

ShapeEval shape_gradients(const Vector& x, const PointSet& p,
                          const LmeParams& params) {
  ShapeEval ev = shape_values(x, p, params);
  const auto n = static_cast<Index>(ev.node_ids.size());
  Matrix offsets(p.dim(), n);
  for (Index k = 0; k < n; ++k) {
    offsets.col(k) = x - p.point(ev.node_ids[static_cast<size_t>(k)]);
  }
  Matrix j_star = offsets * ev.weights.asDiagonal() * offsets.transpose();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(j_star);
  const Scalar emin = eig.eigenvalues().minCoeff();
  const Scalar emax = eig.eigenvalues().maxCoeff();
  if (!(emin > 0) || emin <= emax * 1e-14) {
    throw std::runtime_error("degenerate J*: active node set is affinely deficient");
  }
  Eigen::LLT<Matrix> llt(j_star);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("degenerate J*: factorization failed");
  }
  ev.gradients = -(llt.solve(offsets) * ev.weights.asDiagonal());
  ev.j_star = std::move(j_star);
  return ev;
}

Scalar primal_objective(const Vector& x, const Vector& weights,
                        const PointSet& p, const LmeParams& params) {
  params.validate();
  if (weights.size() != p.size()) {
    throw std::invalid_argument("primal_objective: one weight per node required");
  }
  Scalar width = 0, entropy = 0;
  for (Index a = 0; a < p.size(); ++a) {
    const Scalar w = weights[a];
    if (w < 0) throw std::invalid_argument("primal_objective: negative weight");
    width += w * (x - p.point(a)).squaredNorm();
    if (w > 0) entropy += w * std::log(w);
  }
  return width + entropy / params.beta();
}

}  // namespace lme
