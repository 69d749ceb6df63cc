#pragma once

#include <optional>
#include <vector>

#include "lme/domain.hpp"
#include "lme/lme.hpp"

namespace lme {

/// Worst residuals of the consistency identities over a probe set:
/// partition of unity, vanishing first moment, vanishing gradient sum, and
/// the gradient moment sum_a d_j w_a (x_a - x)_i = delta_ij.
struct ConsistencyReport {
  bool pass = false;
  Scalar worst_partition = 0;
  Scalar worst_first_moment = 0;
  Scalar worst_gradient_sum = 0;
  Scalar worst_gradient_moment = 0;
  Index probes = 0;
  /// Probes whose active set is affinely deficient: gradient identities are
  /// vacuous there and only the value identities are checked.
  Index vacuous = 0;
  Index failed_solves = 0;
  Scalar tol_partition = 0, tol_first_moment = 0, tol_gradient_sum = 0,
         tol_gradient_moment = 0;
};

struct ConsistencyOptions {
  /// Test hook: added to the first weight before the identity sums, so a
  /// deliberate corruption must surface as a failed check.
  Scalar inject_weight_error = 0;
};

ConsistencyReport check_consistency_suite(const PointSet& p,
                                          const LmeParams& params,
                                          const Matrix& probes,
                                          const ConsistencyOptions& opts = {});

/// sup over probes, active nodes, and |alpha| <= 1 of
/// (1 + |x - x_a|^2/h^2)^s h^{|alpha|} |D^alpha w_a(x)|.
struct DecayReport {
  Scalar s = 0;
  Scalar measured_c = 0;
  std::vector<std::pair<Scalar, Scalar>> per_h;  // (h, measured_c)
};

DecayReport check_decay(const PointSet& p, const LmeParams& params, Scalar s,
                        const Matrix& probes);

/// Smallest integer c with sum of weights outside the ball of radius c*h
/// at most theta, at every probe.
int check_concentration(const PointSet& p, const LmeParams& params,
                        Scalar theta, const Matrix& probes);

/// One measured dual-solve bound with the scale it is predicted to follow;
/// measured/normalization should stay flat under h-refinement.
struct BoundReport {
  enum class Kind { kLambda, kZLow, kZHigh, kJInv };
  Kind kind;
  Scalar measured = 0;
  Scalar normalization = 1;
  Scalar normalized() const { return measured / normalization; }
};

const char* to_string(BoundReport::Kind k);

/// Measures sup |lambda*|, min/max Z at the optimum, and sup |J*^{-1}| over
/// probes whose epsilon*h ball stays inside the hull (caller guarantees).
std::vector<BoundReport> check_dual_bounds(const PointSet& p,
                                           const LmeParams& params,
                                           Scalar epsilon,
                                           const Matrix& probes);

/// Two-node dual optimum on {a, a+h}: the closed form
/// [log(a+h-x) - log(x-a)]/h + (gamma/h^2)(2x - 2a - h) for a < x < a+h.
Scalar closed_form_lambda_1d(Scalar x, Scalar a, Scalar h, Scalar gamma);

/// Throws unless no node has a boundary distance in (0, eta_h): the gap
/// hypothesis the near-boundary analysis rests on.
void require_boundary_gap(const PointSet& p, const Domain& domain,
                          Scalar eta_h);

struct BoundaryProbeOptions {
  /// Fractional position of the probe line's base point along the face
  /// (kept away from 1/2 so no symmetry zeroes the cross moments).
  Scalar face_param = 0.37;
  /// Required clearance of the base point from the other faces, in units
  /// of h.
  Scalar min_face_clearance = 1.0;
  /// Boundary gap parameter; 0 means the generator's 0.5/sqrt(d).
  Scalar eta = 0;
};

/// Dual-solve scalings along the inward normal of one (d-1)-face, in
/// face-adapted coordinates (Householder map sending the normal to axis 1).
struct BoundaryProbeReport {
  std::vector<Scalar> rho_list;  // converged rows, descending rho
  std::vector<Scalar> lambda1;
  std::vector<Scalar> rho_lambda1;
  std::vector<Scalar> j11;
  std::vector<Scalar> j1j_max;
  std::vector<Scalar> b_min_eig;
  std::optional<Scalar> j11_vs_rho;  // log-log slope
  std::optional<Scalar> j1j_vs_rho;
  Matrix rotation;
  Vector base_point;
  Scalar smallest_converged_rho = std::numeric_limits<Scalar>::infinity();
  Index non_converged = 0;
  Index excluded_rhos = 0;  // below the 1e-6*h resolution floor
};

BoundaryProbeReport boundary_scaling_probe(const Domain& domain, Index face,
                                           const PointSet& p,
                                           const LmeParams& params,
                                           std::vector<Scalar> rho_list,
                                           const BoundaryProbeOptions& opts = {});

/// sup over probes and far nodes (boundary distance >= r_multiple*h) of
/// (1 + |x - x_a|^2/h^2)^s h |grad w_a(x)|. Zero when no node qualifies.
Scalar far_node_gradient_check(const Domain& domain, const PointSet& p,
                               const LmeParams& params, Scalar r_multiple,
                               Scalar s, const Matrix& probes);

}  // namespace lme
