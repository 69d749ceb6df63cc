#include "lme/interpolate.hpp"

#include <stdexcept>

namespace lme {

Scalar interpolate(const Vector& samples, const Vector& x, const PointSet& p,
                   const LmeParams& params) {
  if (samples.size() != p.size()) {
    throw std::invalid_argument("interpolate: one sample per node required");
  }
  const ShapeEval ev = shape_values(x, p, params);
  Scalar acc = 0;
  for (size_t k = 0; k < ev.node_ids.size(); ++k) {
    acc += samples[ev.node_ids[k]] * ev.weights[static_cast<Index>(k)];
  }
  return acc;
}

Vector interpolate_gradient(const Vector& samples, const Vector& x,
                            const PointSet& p, const LmeParams& params) {
  if (samples.size() != p.size()) {
    throw std::invalid_argument("interpolate_gradient: one sample per node required");
  }
  const ShapeEval ev = shape_gradients(x, p, params);
  Vector acc = Vector::Zero(p.dim());
  for (size_t k = 0; k < ev.node_ids.size(); ++k) {
    acc += samples[ev.node_ids[k]] * ev.gradients->col(static_cast<Index>(k));
  }
  return acc;
}

Scalar taylor_remainder(const ScalarField& field, const Vector& x_a,
                        const Vector& x) {
  if (!field.has_gradient()) {
    throw std::invalid_argument("taylor_remainder: field needs a gradient");
  }
  return field.value(x_a) - field.value(x) - field.gradient(x).dot(x_a - x);
}

Scalar multipoint_identity_residual(const ScalarField& field, const Vector& x,
                                    const PointSet& p, const LmeParams& params,
                                    const MultiIndex& alpha) {
  if (!field.has_gradient()) {
    throw std::invalid_argument("multipoint identity: field needs a gradient");
  }
  if (alpha.degree() > 1) {
    throw std::invalid_argument("multipoint identity: |alpha| <= 1 supported");
  }
  const ShapeEval ev = shape_gradients(x, p, params);

  Scalar interp = 0, exact = 0, remainder_sum = 0;
  const int j = alpha.direction();
  for (size_t k = 0; k < ev.node_ids.size(); ++k) {
    const Vector x_a = p.point(ev.node_ids[k]);
    const Scalar dw = alpha.degree() == 0
                          ? ev.weights[static_cast<Index>(k)]
                          : (*ev.gradients)(j, static_cast<Index>(k));
    interp += field.value(x_a) * dw;
    remainder_sum += taylor_remainder(field, x_a, x) * dw;
  }
  exact = alpha.degree() == 0 ? field.value(x) : field.gradient(x)[j];
  return std::abs(interp - exact - remainder_sum);
}

}  // namespace lme
