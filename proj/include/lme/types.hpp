#pragma once

#include <Eigen/Dense>

namespace lme {

using Scalar = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Points live in dimension 1..3.
inline constexpr int kMaxDim = 3;

inline void check_dim(Eigen::Index d) {
  if (d < 1 || d > kMaxDim) {
    throw std::invalid_argument("dimension must be between 1 and " +
                                std::to_string(kMaxDim) + ", got " +
                                std::to_string(d));
  }
}

// Multi-index over d coordinates; evaluation paths use degree() <= 1 only.
struct MultiIndex {
  Eigen::VectorXi exponents;

  MultiIndex() = default;
  explicit MultiIndex(Eigen::VectorXi e) : exponents(std::move(e)) {
    if ((exponents.array() < 0).any()) {
      throw std::invalid_argument("multi-index exponents must be nonnegative");
    }
  }

  static MultiIndex zero(int d) { return MultiIndex(Eigen::VectorXi::Zero(d)); }
  static MultiIndex unit(int d, int j) {
    Eigen::VectorXi e = Eigen::VectorXi::Zero(d);
    e[j] = 1;
    return MultiIndex(e);
  }

  int degree() const { return exponents.sum(); }
  // For degree-1 indices, the active coordinate.
  int direction() const {
    for (int j = 0; j < exponents.size(); ++j)
      if (exponents[j] > 0) return j;
    return -1;
  }
};

}  // namespace lme
