#include "lme/generate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace lme {
namespace {

// End-inclusive per-axis lattice over [lo, hi] with spacing <= delta.
std::vector<Scalar> axis_coords(Scalar lo, Scalar hi, Scalar delta) {
  const auto segments =
      std::max<Index>(1, static_cast<Index>(std::ceil((hi - lo) / delta - 1e-12)));
  std::vector<Scalar> c(static_cast<size_t>(segments) + 1);
  for (Index k = 0; k <= segments; ++k) {
    c[static_cast<size_t>(k)] =
        lo + (hi - lo) * static_cast<Scalar>(k) / static_cast<Scalar>(segments);
  }
  c.front() = lo;
  c.back() = hi;
  return c;
}

}  // namespace

PointSet generate_grid_points(const Domain& domain, Scalar h, Scalar jitter,
                              std::uint64_t seed) {
  if (!(h > 0)) throw std::invalid_argument("generate_grid_points: h must be > 0");
  if (!(jitter >= 0 && jitter < 0.5)) {
    throw std::invalid_argument("generate_grid_points: jitter must be in [0, 0.5)");
  }
  const int d = domain.dim();
  const Scalar delta = h / std::sqrt(static_cast<Scalar>(d));
  const Scalar gap = 0.5 * delta;
  const Scalar on_boundary = 1e-12 * std::max<Scalar>(1.0, domain.diameter());

  std::vector<std::vector<Scalar>> axes(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    axes[static_cast<size_t>(j)] =
        axis_coords(domain.bbox_lo()[j], domain.bbox_hi()[j], delta);
  }

  std::mt19937_64 eng(seed);
  std::vector<Vector> kept;
  std::vector<Index> it(static_cast<size_t>(d), 0);
  Vector x(d);
  while (true) {
    for (int j = 0; j < d; ++j) {
      x[j] = axes[static_cast<size_t>(j)][static_cast<size_t>(it[static_cast<size_t>(j)])];
    }
    const Scalar margin = domain.boundary_margin(x);
    const bool inside = margin >= -on_boundary;
    const bool interior = margin > on_boundary;
    const bool gap_ok = !interior || margin >= gap - on_boundary;
    if (inside && gap_ok) {
      Vector node = x;
      if (interior && jitter > 0) {
        // Per-coordinate jitter bounded so the displacement norm stays
        // under jitter*delta; shrink until the node keeps its clearance.
        Vector disp(d);
        const Scalar amp = jitter * delta / std::sqrt(static_cast<Scalar>(d));
        for (int j = 0; j < d; ++j) disp[j] = amp * (2.0 * detail::uniform01(eng) - 1.0);
        for (int attempt = 0; attempt < 20; ++attempt) {
          const Vector cand = x + disp;
          if (domain.boundary_margin(cand) >= gap - on_boundary) {
            node = cand;
            break;
          }
          disp *= 0.5;
        }
      }
      kept.push_back(node);
    }
    // Advance the product-lattice iterator.
    int j = 0;
    for (; j < d; ++j) {
      if (++it[static_cast<size_t>(j)] <
          static_cast<Index>(axes[static_cast<size_t>(j)].size()))
        break;
      it[static_cast<size_t>(j)] = 0;
    }
    if (j == d) break;
  }

  Matrix pts(d, static_cast<Index>(kept.size()));
  for (Index a = 0; a < pts.cols(); ++a) pts.col(a) = kept[static_cast<size_t>(a)];
  return PointSet(std::move(pts));
}

Matrix lattice_probes(const Domain& domain, Scalar spacing, Scalar margin) {
  if (!(spacing > 0)) throw std::invalid_argument("lattice_probes: spacing must be > 0");
  const int d = domain.dim();
  std::vector<std::vector<Scalar>> axes(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    axes[static_cast<size_t>(j)] =
        axis_coords(domain.bbox_lo()[j], domain.bbox_hi()[j], spacing);
  }
  std::vector<Vector> kept;
  std::vector<Index> it(static_cast<size_t>(d), 0);
  Vector x(d);
  while (true) {
    for (int j = 0; j < d; ++j) {
      x[j] = axes[static_cast<size_t>(j)][static_cast<size_t>(it[static_cast<size_t>(j)])];
    }
    if (domain.boundary_margin(x) >= margin) kept.push_back(x);
    int j = 0;
    for (; j < d; ++j) {
      if (++it[static_cast<size_t>(j)] <
          static_cast<Index>(axes[static_cast<size_t>(j)].size()))
        break;
      it[static_cast<size_t>(j)] = 0;
    }
    if (j == d) break;
  }
  Matrix probes(d, static_cast<Index>(kept.size()));
  for (Index a = 0; a < probes.cols(); ++a) probes.col(a) = kept[static_cast<size_t>(a)];
  return probes;
}

Matrix random_interior_probes(const Domain& domain, Index count, Scalar margin,
                              std::uint64_t seed) {
  const int d = domain.dim();
  std::mt19937_64 eng(seed);
  Matrix probes(d, count);
  for (Index a = 0; a < count; ++a) {
    Vector x(d);
    int guard = 0;
    do {
      for (int j = 0; j < d; ++j) {
        x[j] = domain.bbox_lo()[j] +
               detail::uniform01(eng) * (domain.bbox_hi()[j] - domain.bbox_lo()[j]);
      }
      if (++guard > 1000000) {
        throw std::runtime_error("random_interior_probes: margin leaves no room");
      }
    } while (domain.boundary_margin(x) < margin);
    probes.col(a) = x;
  }
  return probes;
}

}  // namespace lme
