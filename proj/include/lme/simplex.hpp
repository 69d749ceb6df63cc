#pragma once

#include "lme/types.hpp"

namespace lme {

/// Barycentric coordinates of x in the simplex with vertex columns `verts`
/// (d+1 columns). Returns false for affinely dependent vertices.
bool barycentric_coordinates(const Matrix& verts, const Vector& x, Vector& bary);

/// x in the closed simplex, with face tolerance `tol` (points on faces count).
bool simplex_contains(const Matrix& verts, const Vector& x, Scalar tol = 1e-12);

/// Diameter of the smallest ball enclosing the given points (2..4 points,
/// d <= 3): the "size" of a simplex. Exact case analysis over support sets.
Scalar enclosing_ball_diameter(const Matrix& pts);

}  // namespace lme
