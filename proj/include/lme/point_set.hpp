#pragma once

#include <vector>

#include "lme/types.hpp"

namespace lme {

/// Immutable node set with a uniform-grid spatial index. The index is an
/// implementation detail; radius queries agree with a brute-force scan.
class PointSet {
 public:
  /// Points are columns of a d x N matrix. Rejects non-finite entries and
  /// duplicates closer than 1e-12.
  explicit PointSet(Matrix points);

  int dim() const { return static_cast<int>(pts_.rows()); }
  Index size() const { return pts_.cols(); }
  bool empty() const { return pts_.cols() == 0; }

  const Matrix& points() const { return pts_; }
  auto point(Index a) const { return pts_.col(a); }

  /// Indices a with |x_a - x| <= radius, ascending. radius = inf returns all.
  std::vector<Index> radius_query(const Vector& x, Scalar radius) const;

  /// Indices of (up to) k nearest nodes, sorted by distance to x.
  std::vector<Index> nearest(const Vector& x, Index k) const;

 private:
  void build_index();
  Index cell_of(const Vector& x) const;
  Index clamp_cell(int axis, Scalar coord) const;

  Matrix pts_;
  // Uniform bucket grid over the bounding box.
  Vector grid_lo_;
  Scalar cell_ = 1.0;
  Eigen::Array<Index, Eigen::Dynamic, 1> cells_per_axis_;
  std::vector<std::vector<Index>> buckets_;
};

/// Exactly the indices with |x_a - x| <= radius, in ascending index order.
inline std::vector<Index> neighbors_within(const PointSet& p, const Vector& x,
                                           Scalar radius) {
  if (!(radius > 0) && radius != 0) {
    throw std::invalid_argument("neighbors_within: radius must be >= 0");
  }
  return p.radius_query(x, radius);
}

}  // namespace lme
