#include "lme/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lme/simplex.hpp"

namespace lme {
namespace {

// Smallest containing simplex size among (d+1)-subsets of the candidates,
// early-exiting on the first one under the target. Candidates come sorted
// by distance, so near subsets are tried first.
std::optional<Scalar> find_covering_simplex(const PointSet& p,
                                            const Vector& x,
                                            const std::vector<Index>& cand,
                                            Scalar h, Scalar bary_tol) {
  const Index d = p.dim();
  const auto n = static_cast<Index>(cand.size());
  if (n < d + 1) return std::nullopt;

  std::optional<Scalar> best;
  std::vector<Index> idx(static_cast<size_t>(d) + 1);
  for (Index k = 0; k <= d; ++k) idx[static_cast<size_t>(k)] = k;
  Matrix verts(d, d + 1);
  while (true) {
    for (Index k = 0; k <= d; ++k) {
      verts.col(k) = p.point(cand[static_cast<size_t>(idx[static_cast<size_t>(k)])]);
    }
    if (simplex_contains(verts, x, bary_tol)) {
      const Scalar size = enclosing_ball_diameter(verts);
      if (!best || size < *best) best = size;
      if (size < h) return best;  // good enough, stop searching
    }
    Index k = d;
    while (k >= 0 && idx[static_cast<size_t>(k)] == n - (d + 1) + k) --k;
    if (k < 0) break;
    ++idx[static_cast<size_t>(k)];
    for (Index j = k + 1; j <= d; ++j) {
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return best;
}

}  // namespace

int h_density_bound(const PointSet& p, Scalar h, const Matrix& probes) {
  if (!(h > 0)) throw std::invalid_argument("h_density_bound: h must be > 0");
  int worst = 0;
  auto count_at = [&](const Vector& x) {
    worst = std::max(worst, static_cast<int>(p.radius_query(x, h).size()));
  };
  for (Index c = 0; c < probes.cols(); ++c) count_at(probes.col(c));
  for (Index a = 0; a < p.size(); ++a) count_at(p.point(a));
  return worst;
}

RegularityReport verify_h_covering(const PointSet& p, const Domain& domain,
                                   Scalar h, const Matrix& probes,
                                   const CoveringOptions& opts) {
  if (!(h > 0)) throw std::invalid_argument("verify_h_covering: h must be > 0");
  RegularityReport rep;
  rep.h = h;
  rep.tau_hat = h_density_bound(p, h, probes);
  for (Index a = 0; a < p.size(); ++a) {
    const Scalar m = domain.boundary_margin(p.point(a));
    if (m > 1e-12) rep.eta_hat = std::min(rep.eta_hat, m / h);
  }

  if (p.dim() == 1) {
    // Exact gap analysis: every x between consecutive nodes lies in that
    // segment, whose size is the gap.
    std::vector<Scalar> coords(static_cast<size_t>(p.size()));
    for (Index a = 0; a < p.size(); ++a) coords[static_cast<size_t>(a)] = p.point(a)[0];
    std::sort(coords.begin(), coords.end());
    Scalar max_gap = 0;
    for (size_t i = 0; i + 1 < coords.size(); ++i) {
      max_gap = std::max(max_gap, coords[i + 1] - coords[i]);
    }
    const bool spans = !coords.empty() &&
                       coords.front() <= domain.bbox_lo()[0] + 1e-12 &&
                       coords.back() >= domain.bbox_hi()[0] - 1e-12;
    rep.max_simplex_size = coords.size() >= 2
                               ? max_gap
                               : std::numeric_limits<Scalar>::infinity();
    rep.covering_ok = spans && coords.size() >= 2 && max_gap < h;
    if (!rep.covering_ok && probes.cols() > 0) rep.first_failing_probe = probes.col(0);
    return rep;
  }

  rep.covering_ok = true;
  rep.max_simplex_size = 0;
  for (Index c = 0; c < probes.cols(); ++c) {
    const Vector x = probes.col(c);
    const auto cand = p.nearest(x, opts.k_nearest);
    const auto size = find_covering_simplex(p, x, cand, h, opts.bary_tol);
    if (size && *size < h) {
      rep.max_simplex_size = std::max(rep.max_simplex_size, *size);
      continue;
    }
    rep.covering_ok = false;
    rep.max_simplex_size = std::max(
        rep.max_simplex_size,
        size ? *size : std::numeric_limits<Scalar>::infinity());
    if (!rep.first_failing_probe) rep.first_failing_probe = x;
  }
  return rep;
}

int ring_count(const PointSet& p, const Vector& x, Scalar h, int t) {
  if (!(h > 0) || t < 1) throw std::invalid_argument("ring_count: h > 0, t >= 1");
  const Scalar inner = (t - 1) * h;
  int n = 0;
  for (Index a : p.radius_query(x, t * h)) {
    const Scalar dist = (p.point(a) - x).norm();
    if (dist >= inner && dist < t * h) ++n;
  }
  return n;
}

}  // namespace lme
