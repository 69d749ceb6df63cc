#include "lme/simplex.hpp"

#include <limits>
#include <stdexcept>

namespace lme {
namespace {

// Circumcenter of an affinely independent point tuple within its affine
// hull: c = p0 + V y with (V^T V) y = 0.5 diag(V^T V).
bool circumcenter(const Matrix& pts, Vector& center) {
  const Index k = pts.cols() - 1;
  Matrix v(pts.rows(), k);
  for (Index j = 0; j < k; ++j) v.col(j) = pts.col(j + 1) - pts.col(0);
  Matrix gram = v.transpose() * v;
  Vector rhs(k);
  for (Index j = 0; j < k; ++j) rhs[j] = 0.5 * v.col(j).squaredNorm();
  Eigen::FullPivLU<Matrix> lu(gram);
  if (!lu.isInvertible()) return false;
  center = pts.col(0) + v * lu.solve(rhs);
  return true;
}

}  // namespace

bool barycentric_coordinates(const Matrix& verts, const Vector& x, Vector& bary) {
  const Index d = verts.rows();
  if (verts.cols() != d + 1) {
    throw std::invalid_argument("simplex needs d+1 vertices");
  }
  Matrix edges(d, d);
  for (Index j = 0; j < d; ++j) edges.col(j) = verts.col(j + 1) - verts.col(0);
  Eigen::FullPivLU<Matrix> lu(edges);
  if (!lu.isInvertible()) return false;
  Vector b = lu.solve(x - verts.col(0));
  bary.resize(d + 1);
  bary[0] = 1.0 - b.sum();
  bary.tail(d) = b;
  return true;
}

bool simplex_contains(const Matrix& verts, const Vector& x, Scalar tol) {
  Vector bary;
  if (!barycentric_coordinates(verts, x, bary)) return false;
  return (bary.array() >= -tol).all();
}

Scalar enclosing_ball_diameter(const Matrix& pts) {
  const Index n = pts.cols();
  if (n < 2 || n > 4 || pts.rows() > kMaxDim) {
    throw std::invalid_argument("enclosing ball: supports 2..4 points, d <= 3");
  }
  const Scalar slack = 1e-12 * (1.0 + pts.cwiseAbs().maxCoeff());
  Scalar best = std::numeric_limits<Scalar>::infinity();

  auto consider = [&](const Vector& c, Scalar r) {
    for (Index j = 0; j < n; ++j) {
      if ((pts.col(j) - c).norm() > r + slack) return;
    }
    best = std::min(best, r);
  };

  // Two-point support: midpoint balls.
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Vector c = 0.5 * (pts.col(i) + pts.col(j));
      consider(c, (pts.col(i) - c).norm());
    }
  }
  // Three- and four-point support: circumscribed balls.
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        Matrix sub(pts.rows(), 3);
        sub << pts.col(i), pts.col(j), pts.col(k);
        Vector c;
        if (circumcenter(sub, c)) consider(c, (pts.col(i) - c).norm());
      }
    }
  }
  if (n == 4) {
    Vector c;
    if (circumcenter(pts, c)) consider(c, (pts.col(0) - c).norm());
  }
  return 2.0 * best;
}

}  // namespace lme
