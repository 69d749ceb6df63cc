#pragma once

#include "lme/fields.hpp"
#include "lme/lme.hpp"

namespace lme {

/// Interpolant value sum_a samples[a] w_a(x) over the active neighbor set.
Scalar interpolate(const Vector& samples, const Vector& x, const PointSet& p,
                   const LmeParams& params);

/// Interpolant gradient sum_a samples[a] grad w_a(x).
Vector interpolate_gradient(const Vector& samples, const Vector& x,
                            const PointSet& p, const LmeParams& params);

/// First-order Taylor remainder u(x_a) - u(x) - <grad u(x), x_a - x>.
Scalar taylor_remainder(const ScalarField& field, const Vector& x_a,
                        const Vector& x);

/// |D^a u_I(x) - D^a u(x) - sum_a R2(x, x_a) D^a w_a(x)| for |a| <= 1.
/// An algebraic identity of first-order consistent schemes, so the result
/// should sit at the floating-point floor.
Scalar multipoint_identity_residual(const ScalarField& field, const Vector& x,
                                    const PointSet& p, const LmeParams& params,
                                    const MultiIndex& alpha);

}  // namespace lme
