#include "lme/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lme {
namespace {

constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

void check_derivatives(const ScalarField& f, const std::vector<Vector>& samples) {
  const Scalar step = 1e-6;
  for (const Vector& x : samples) {
    const int d = static_cast<int>(x.size());
    if (f.has_gradient()) {
      const Vector g = f.gradient(x);
      for (int j = 0; j < d; ++j) {
        Vector xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        const Scalar fd = (f.value(xp) - f.value(xm)) / (2 * step);
        const Scalar scale = std::max<Scalar>(1.0, std::abs(g[j]));
        if (std::abs(fd - g[j]) > 1e-5 * scale) {
          throw std::invalid_argument("field '" + f.name +
                                      "': gradient disagrees with finite "
                                      "differences of value");
        }
      }
    }
    if (f.has_hessian() && f.has_gradient()) {
      const Matrix hess = f.hessian(x);
      for (int j = 0; j < d; ++j) {
        Vector xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        const Vector fd = (f.gradient(xp) - f.gradient(xm)) / (2 * step);
        for (int i = 0; i < d; ++i) {
          const Scalar scale = std::max<Scalar>(1.0, std::abs(hess(i, j)));
          if (std::abs(fd[i] - hess(i, j)) > 1e-5 * scale) {
            throw std::invalid_argument("field '" + f.name +
                                        "': hessian disagrees with finite "
                                        "differences of gradient");
          }
        }
      }
    }
  }
}

std::vector<Vector> default_samples(int dim) {
  std::vector<Vector> s;
  s.push_back(Vector::Constant(dim, 0.5));
  s.push_back(Vector::Constant(dim, 0.3));
  Vector v = Vector::Constant(dim, 0.7);
  v[0] = 0.2;
  s.push_back(v);
  return s;
}

}  // namespace

ScalarField::ScalarField(std::string name_,
                         std::function<Scalar(const Vector&)> value_,
                         std::function<Vector(const Vector&)> gradient_,
                         std::function<Matrix(const Vector&)> hessian_,
                         Scalar d2_sup_norm_,
                         const std::vector<Vector>& check_samples)
    : name(std::move(name_)),
      value(std::move(value_)),
      gradient(std::move(gradient_)),
      hessian(std::move(hessian_)),
      d2_sup_norm(d2_sup_norm_) {
  if (!value) throw std::invalid_argument("field needs a value function");
  if (!check_samples.empty()) check_derivatives(*this, check_samples);
}

ScalarField make_field(const std::string& name, int dim) {
  check_dim(dim);
  const auto samples = default_samples(dim);

  if (name == "affine") {
    Vector c1(3);
    c1 << 1.3, -0.4, 0.25;
    const Vector c = c1.head(dim);
    return ScalarField(
        name, [c](const Vector& x) { return 0.7 + c.dot(x); },
        [c](const Vector& x) { return Vector(c); },
        [dim](const Vector&) { return Matrix::Zero(dim, dim); }, 0.0, samples);
  }
  if (name == "quadratic") {
    Matrix q(3, 3);
    q << 2.0, 0.4, -0.3,
         0.4, 1.5, 0.2,
        -0.3, 0.2, 1.1;
    const Matrix qq = q.topLeftCorner(dim, dim);
    Vector b(3);
    b << 0.3, -0.7, 0.5;
    const Vector bb = b.head(dim);
    return ScalarField(
        name,
        [qq, bb](const Vector& x) { return 0.5 * x.dot(qq * x) + bb.dot(x); },
        [qq, bb](const Vector& x) { return Vector(qq * x + bb); },
        [qq](const Vector&) { return Matrix(qq); },
        Eigen::SelfAdjointEigenSolver<Matrix>(qq).eigenvalues().cwiseAbs().maxCoeff(),
        samples);
  }
  if (name == "sinusoid") {
    // sin(pi x1) in 1d, sin(pi x1) cos(pi x2) [cos(pi x3)] beyond.
    auto value = [dim](const Vector& x) {
      Scalar v = std::sin(kPi * x[0]);
      for (int j = 1; j < dim; ++j) v *= std::cos(kPi * x[j]);
      return v;
    };
    auto factor = [dim](const Vector& x, int j, int deriv) {
      const Scalar a = kPi * x[j];
      if (j == 0) {
        const Scalar tbl[4] = {std::sin(a), std::cos(a), -std::sin(a), -std::cos(a)};
        return tbl[deriv % 4] * std::pow(kPi, deriv);
      }
      const Scalar tbl[4] = {std::cos(a), -std::sin(a), -std::cos(a), std::sin(a)};
      return tbl[deriv % 4] * std::pow(kPi, deriv);
    };
    auto gradient = [dim, factor](const Vector& x) {
      Vector g(dim);
      for (int i = 0; i < dim; ++i) {
        Scalar v = 1;
        for (int j = 0; j < dim; ++j) v *= factor(x, j, j == i ? 1 : 0);
        g[i] = v;
      }
      return g;
    };
    auto hessian = [dim, factor](const Vector& x) {
      Matrix hess(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          Scalar v = 1;
          for (int k = 0; k < dim; ++k) {
            const int deriv = (k == i ? 1 : 0) + (k == j ? 1 : 0);
            v *= factor(x, k, deriv);
          }
          hess(i, j) = v;
        }
      }
      return hess;
    };
    // |H| <= pi^2 * d in the spectral norm (entries bounded by pi^2).
    return ScalarField(name, value, gradient, hessian, kPi * kPi * dim, samples);
  }
  if (name == "gaussian-bump") {
    const Vector center = Vector::Constant(dim, 0.5);
    const Scalar width = 0.35;
    auto value = [center, width](const Vector& x) {
      return std::exp(-(x - center).squaredNorm() / (width * width));
    };
    auto gradient = [center, width, value](const Vector& x) {
      return Vector(-2.0 / (width * width) * value(x) * (x - center));
    };
    auto hessian = [center, width, value, dim](const Vector& x) {
      const Vector y = (x - center) * (2.0 / (width * width));
      return Matrix(value(x) *
                    (y * y.transpose() - 2.0 / (width * width) *
                                             Matrix::Identity(dim, dim)));
    };
    // Coarse bound: max of 2/w^2 e^{-t}(2t/w^2..) over the box; 2/w^2 * 2 covers it.
    return ScalarField(name, value, gradient, hessian, 4.0 / (width * width),
                       samples);
  }
  throw std::invalid_argument("unknown field '" + name + "'; available: " +
                              [] {
                                std::string all;
                                for (const auto& n : field_names()) {
                                  if (!all.empty()) all += ", ";
                                  all += n;
                                }
                                return all;
                              }());
}

std::vector<std::string> field_names() {
  return {"affine", "quadratic", "sinusoid", "gaussian-bump"};
}

}  // namespace lme
