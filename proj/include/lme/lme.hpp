#pragma once

#include <optional>
#include <vector>

#include "lme/point_set.hpp"

namespace lme {

/// Knobs of the max-ent scheme. The Gaussian width parameter is
/// beta = gamma / h^2, so gamma is dimensionless and h carries the
/// point-set spacing.
struct LmeParams {
  Scalar gamma = 1.8;
  Scalar h = 1.0;
  /// Newton stops when |r| <= newton_tol / h; the dual variable scales
  /// like 1/h, so a fixed absolute tolerance would be h-inconsistent.
  Scalar newton_tol = 1e-12;
  int max_iters = 100;
  /// Nodes beyond r_cut*h of the evaluation point are dropped. 0 picks the
  /// default with exp(-gamma*r_cut^2) < 1e-16; inf keeps every node.
  Scalar r_cut = 0;

  Scalar beta() const { return gamma / (h * h); }
  Scalar cutoff_multiplier() const;
  Scalar cutoff_radius() const { return cutoff_multiplier() * h; }
  void validate() const;
};

enum class SolveStatus { kConverged, kMaxIters, kOutsideHull };

const char* to_string(SolveStatus s);

/// Dual optimum at one evaluation point.
struct DualSolution {
  Vector lambda_star;
  Scalar log_z = 0;
  int iters = 0;
  SolveStatus status = SolveStatus::kMaxIters;
  Scalar r_norm = std::numeric_limits<Scalar>::infinity();
};

/// Shape-function evaluation over the active neighbor set.
struct ShapeEval {
  std::vector<Index> node_ids;
  Vector weights;
  /// Column a holds grad w_a; present after shape_gradients.
  std::optional<Matrix> gradients;
  /// Second-moment matrix sum_a w_a (x - x_a)(x - x_a)^T.
  std::optional<Matrix> j_star;
  DualSolution dual;
};

struct LogPartition {
  Scalar log_z = 0;
  Vector r;
  Matrix j;
};

/// Raised when an operation needs a converged dual solve and did not get one.
struct SolveError : std::runtime_error {
  SolveStatus status;
  SolveError(SolveStatus s, const std::string& msg)
      : std::runtime_error(msg), status(s) {}
};

/// log Z and its first two derivatives in the dual variable, evaluated with
/// exponent-shift stabilization (safe for large |lambda|).
LogPartition log_partition(const Vector& x, const Vector& lambda,
                           const PointSet& p, const LmeParams& params);

/// Damped Newton minimization of log Z from lambda = 0 with backtracking on
/// the objective. Status kOutsideHull flags a numerically singular Hessian
/// together with a runaway multiplier, the signature of x on or outside the
/// convex hull of the active nodes.
DualSolution solve_dual(const Vector& x, const PointSet& p,
                        const LmeParams& params);

/// Shape-function weights at x (requires a converged dual solve).
ShapeEval shape_values(const Vector& x, const PointSet& p,
                       const LmeParams& params);

/// Weights plus gradients grad w_a = -w_a J*^{-1} (x - x_a) and the
/// second-moment matrix J*.
ShapeEval shape_gradients(const Vector& x, const PointSet& p,
                          const LmeParams& params);

/// Pointwise max-ent objective sum_a w_a |x - x_a|^2 + (1/beta) sum_a
/// w_a log w_a for caller-supplied weights over all nodes (0 log 0 = 0).
Scalar primal_objective(const Vector& x, const Vector& weights,
                        const PointSet& p, const LmeParams& params);

}  // namespace lme
