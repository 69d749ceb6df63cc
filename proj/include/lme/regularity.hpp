#pragma once

#include <optional>

#include "lme/domain.hpp"
#include "lme/point_set.hpp"

namespace lme {

/// Point-set regularity measurements at a given h.
struct RegularityReport {
  Scalar h = 0;
  /// Empirical density bound: max nodes in any probed closed h-ball.
  int tau_hat = 0;
  bool covering_ok = false;
  /// Largest simplex size a probe needed (max gap in 1d); >= h or infinite
  /// when covering fails.
  Scalar max_simplex_size = 0;
  /// Min over interior nodes of dist(x, boundary)/h.
  Scalar eta_hat = std::numeric_limits<Scalar>::infinity();
  std::optional<Vector> first_failing_probe;
};

struct CoveringOptions {
  /// Candidate pool per probe for the simplex search.
  Index k_nearest = 32;
  Scalar bary_tol = 1e-12;
};

/// Max over probe columns and the nodes themselves of the number of nodes in
/// the closed ball of radius h. An empirical lower bound on the density
/// constant of the set.
int h_density_bound(const PointSet& p, Scalar h, const Matrix& probes);

/// Probe-based covering check: each probe must sit in a d-simplex of size
/// < h with vertices among its nearest nodes (exact gap analysis in 1d).
/// An under-approximation of the covering property: only the probes are
/// certified.
RegularityReport verify_h_covering(const PointSet& p, const Domain& domain,
                                   Scalar h, const Matrix& probes,
                                   const CoveringOptions& opts = {});

/// Number of nodes with (t-1)h <= |x_a - x| < th.
int ring_count(const PointSet& p, const Vector& x, Scalar h, int t);

}  // namespace lme
