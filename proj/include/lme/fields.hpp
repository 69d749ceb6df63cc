#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lme/domain.hpp"

namespace lme {

/// Scalar test field with analytic derivatives. Supplied derivatives are
/// sanity-checked against finite differences of `value` at construction
/// whenever sample points are given.
struct ScalarField {
  std::string name;
  std::function<Scalar(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;   // optional
  std::function<Matrix(const Vector&)> hessian;    // optional
  /// Bound on the spectral norm of the Hessian over the domain of interest.
  Scalar d2_sup_norm = std::numeric_limits<Scalar>::quiet_NaN();

  ScalarField() = default;
  ScalarField(std::string name_, std::function<Scalar(const Vector&)> value_,
              std::function<Vector(const Vector&)> gradient_ = nullptr,
              std::function<Matrix(const Vector&)> hessian_ = nullptr,
              Scalar d2_sup_norm_ = std::numeric_limits<Scalar>::quiet_NaN(),
              const std::vector<Vector>& check_samples = {});

  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool has_hessian() const { return static_cast<bool>(hessian); }
};

/// Built-in registry: affine, quadratic, sinusoid, gaussian-bump.
/// Each comes with analytic gradient, Hessian, and a Hessian sup-norm bound
/// valid on the unit box, and is derivative-checked on construction.
ScalarField make_field(const std::string& name, int dim);

std::vector<std::string> field_names();

}  // namespace lme
