#include "lme/domain.hpp"

#include <algorithm>
#include <stdexcept>

namespace lme {
namespace {

// Grows a column-major point list.
void append_column(Matrix& m, const Vector& v) {
  m.conservativeResize(v.size(), m.cols() + 1);
  m.col(m.cols() - 1) = v;
}

// Candidate extreme-ray directions of the recession cone {u : N u <= 0}.
// With rank(N) == d the cone is pointed, so any nontrivial cone exposes a
// ray lying on d-1 of the hyperplanes {<n_i, u> = 0}.
std::vector<Vector> ray_candidates(const Matrix& normals) {
  const Index d = normals.cols();
  const Index m = normals.rows();
  std::vector<Vector> dirs;
  if (d == 1) {
    Vector u(1);
    u << 1.0;
    dirs.push_back(u);
    dirs.push_back(-u);
  } else if (d == 2) {
    for (Index i = 0; i < m; ++i) {
      Vector p(2);
      p << -normals(i, 1), normals(i, 0);
      dirs.push_back(p);
      dirs.push_back(-p);
    }
  } else {
    for (Index i = 0; i < m; ++i) {
      for (Index j = i + 1; j < m; ++j) {
        Eigen::Vector3d a = normals.row(i), b = normals.row(j);
        Eigen::Vector3d c = a.cross(b);
        if (c.norm() < 1e-12) continue;
        dirs.push_back(c.normalized());
        dirs.push_back(-c.normalized());
      }
    }
  }
  return dirs;
}

bool cone_has_ray(const Matrix& normals) {
  for (const Vector& u : ray_candidates(normals)) {
    if ((normals * u).maxCoeff() <= 1e-12) return true;
  }
  return false;
}

// All feasible intersections of d hyperplanes, one vertex per column.
Matrix enumerate_vertices(const Matrix& normals, const Vector& offsets) {
  const Index d = normals.cols();
  const Index m = normals.rows();
  const Scalar scale = std::max<Scalar>(1.0, offsets.cwiseAbs().maxCoeff());
  Matrix verts(d, 0);

  std::vector<Index> pick(d);
  auto try_subset = [&](const std::vector<Index>& idx) {
    Matrix a(d, d);
    Vector b(d);
    for (Index k = 0; k < d; ++k) {
      a.row(k) = normals.row(idx[k]);
      b[k] = offsets[idx[k]];
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) return;
    Vector v = lu.solve(b);
    if (((normals * v - offsets).array() <= 1e-9 * scale).all()) {
      for (Index c = 0; c < verts.cols(); ++c) {
        if ((verts.col(c) - v).norm() < 1e-9 * scale) return;
      }
      append_column(verts, v);
    }
  };

  // Lexicographic d-subsets of the m faces.
  std::vector<Index> idx(d);
  for (Index k = 0; k < d; ++k) idx[k] = k;
  if (m < d) return verts;
  while (true) {
    try_subset(idx);
    Index k = d - 1;
    while (k >= 0 && idx[k] == m - d + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (Index j = k + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return verts;
}

}  // namespace

Domain Domain::box(const Vector& lo, const Vector& hi) {
  check_dim(lo.size());
  if (lo.size() != hi.size()) throw std::invalid_argument("box: lo/hi size mismatch");
  if (!lo.allFinite() || !hi.allFinite() || ((hi - lo).array() <= 0).any()) {
    throw std::invalid_argument("box: requires finite lo < hi per coordinate");
  }
  Domain d;
  d.kind_ = Kind::kBox;
  d.lo_ = lo;
  d.hi_ = hi;
  const int dim = static_cast<int>(lo.size());
  for (int j = 0; j < dim; ++j) {
    Vector n = Vector::Zero(dim);
    n[j] = -1.0;
    d.faces_.push_back({n, -lo[j]});
    d.faces_.push_back({-n, hi[j]});
  }
  // Corners.
  const int corners = 1 << dim;
  d.vertices_.resize(dim, corners);
  for (int c = 0; c < corners; ++c) {
    for (int j = 0; j < dim; ++j) {
      d.vertices_(j, c) = (c >> j) & 1 ? hi[j] : lo[j];
    }
  }
  return d;
}

Domain Domain::unit_box(int dim) {
  return box(Vector::Zero(dim), Vector::Ones(dim));
}

Domain Domain::polytope(const Matrix& normals, const Vector& offsets) {
  check_dim(normals.cols());
  if (normals.rows() != offsets.size()) {
    throw std::invalid_argument("polytope: normals/offsets size mismatch");
  }
  if (normals.rows() < normals.cols() + 1) {
    throw std::invalid_argument("polytope: too few half-spaces to bound");
  }
  for (Index i = 0; i < normals.rows(); ++i) {
    if (std::abs(normals.row(i).norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("polytope: face normals must be unit length");
    }
  }

  Eigen::FullPivLU<Matrix> lu(normals);
  if (lu.rank() < normals.cols() || cone_has_ray(normals)) {
    throw std::invalid_argument("polytope: half-space intersection is unbounded");
  }
  Matrix verts = enumerate_vertices(normals, offsets);
  if (verts.cols() == 0) {
    throw std::invalid_argument("polytope: empty intersection");
  }

  Domain d;
  d.kind_ = Kind::kPolytope;
  d.vertices_ = verts;
  d.lo_ = verts.rowwise().minCoeff();
  d.hi_ = verts.rowwise().maxCoeff();
  for (Index i = 0; i < normals.rows(); ++i) {
    d.faces_.push_back({normals.row(i).transpose(), offsets[i]});
  }

  Vector centroid = verts.rowwise().mean();
  if (d.boundary_margin(centroid) <= 1e-12 * std::max<Scalar>(1.0, d.diameter())) {
    throw std::invalid_argument("polytope: interior is empty");
  }
  return d;
}

bool Domain::contains(const Vector& x, Scalar tol) const {
  return boundary_margin(x) >= -tol;
}

Scalar Domain::boundary_margin(const Vector& x) const {
  if (x.size() != lo_.size()) throw std::invalid_argument("point/domain dim mismatch");
  if (kind_ == Kind::kBox) {
    return std::min((x - lo_).minCoeff(), (hi_ - x).minCoeff());
  }
  Scalar m = std::numeric_limits<Scalar>::infinity();
  for (const Halfspace& f : faces_) {
    m = std::min(m, f.offset - f.normal.dot(x));
  }
  return m;
}

}  // namespace lme
