#pragma once

#include <cstdint>

#include "lme/domain.hpp"
#include "lme/point_set.hpp"

namespace lme {

/// Nodes on a Cartesian lattice of spacing h/sqrt(d), clipped to the closed
/// domain. Box faces are populated exactly, so conv(P) equals the closed box.
/// `jitter` in [0, 0.5) displaces interior nodes by at most jitter*h/sqrt(d);
/// boundary nodes stay put. No node ends up with a boundary distance in
/// (0, 0.5*h/sqrt(d)): near-boundary lattice points of skew polytopes are
/// dropped and jitter displacements shrink until the gap holds.
PointSet generate_grid_points(const Domain& domain, Scalar h, Scalar jitter,
                              std::uint64_t seed = 0);

/// Uniform probe lattice of the given spacing over the domain, keeping points
/// with boundary margin >= `margin`. Columns are probe points.
Matrix lattice_probes(const Domain& domain, Scalar spacing, Scalar margin = 0);

/// Seeded uniform samples with boundary margin >= `margin` (rejection).
Matrix random_interior_probes(const Domain& domain, Index count, Scalar margin,
                              std::uint64_t seed);

namespace detail {
/// Deterministic uniform in [0, 1) from a 64-bit generator state.
template <class Engine>
Scalar uniform01(Engine& eng) {
  return static_cast<Scalar>(eng() >> 11) * 0x1.0p-53;
}
}  // namespace detail

}  // namespace lme
