#include "lme/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lme {

PointSet::PointSet(Matrix points) : pts_(std::move(points)) {
  check_dim(pts_.rows());
  if (!pts_.allFinite()) {
    throw std::invalid_argument("point set: non-finite coordinate");
  }
  build_index();

  // Duplicate rejection via the index.
  for (Index a = 0; a < size(); ++a) {
    const auto near = radius_query(pts_.col(a), 1e-12);
    if (near.size() > 1) {
      throw std::invalid_argument("point set: duplicate points within 1e-12");
    }
  }
}

void PointSet::build_index() {
  const int d = dim();
  cells_per_axis_.resize(d);
  if (empty()) {
    grid_lo_ = Vector::Zero(d);
    cell_ = 1.0;
    cells_per_axis_.setConstant(1);
    buckets_.assign(1, {});
    return;
  }
  grid_lo_ = pts_.rowwise().minCoeff();
  const Vector hi = pts_.rowwise().maxCoeff();
  const Scalar extent = std::max((hi - grid_lo_).maxCoeff(), Scalar(0));

  // Aim for O(1) occupancy per cell.
  const auto n_per_axis =
      std::max<Index>(1, static_cast<Index>(std::floor(
                             std::pow(static_cast<Scalar>(size()), 1.0 / d))));
  cell_ = extent > 0 ? extent / static_cast<Scalar>(n_per_axis) : 1.0;

  Index total = 1;
  for (int j = 0; j < d; ++j) {
    const Scalar span = hi[j] - grid_lo_[j];
    cells_per_axis_[j] = std::max<Index>(1, static_cast<Index>(span / cell_) + 1);
    total *= cells_per_axis_[j];
  }
  buckets_.assign(static_cast<size_t>(total), {});
  for (Index a = 0; a < size(); ++a) {
    buckets_[static_cast<size_t>(cell_of(pts_.col(a)))].push_back(a);
  }
}

Index PointSet::clamp_cell(int axis, Scalar coord) const {
  const auto c = static_cast<Index>(std::floor((coord - grid_lo_[axis]) / cell_));
  return std::clamp<Index>(c, 0, cells_per_axis_[axis] - 1);
}

Index PointSet::cell_of(const Vector& x) const {
  Index id = 0;
  for (int j = dim() - 1; j >= 0; --j) {
    id = id * cells_per_axis_[j] + clamp_cell(j, x[j]);
  }
  return id;
}

std::vector<Index> PointSet::radius_query(const Vector& x, Scalar radius) const {
  if (x.size() != dim()) throw std::invalid_argument("query point dim mismatch");
  std::vector<Index> out;
  if (empty()) return out;

  if (std::isinf(radius)) {
    out.resize(static_cast<size_t>(size()));
    for (Index a = 0; a < size(); ++a) out[static_cast<size_t>(a)] = a;
    return out;
  }

  const Scalar r2 = radius * radius;
  const int d = dim();
  Eigen::Array<Index, Eigen::Dynamic, 1> lo(d), hi(d), it(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = clamp_cell(j, x[j] - radius);
    hi[j] = clamp_cell(j, x[j] + radius);
    it[j] = lo[j];
  }
  while (true) {
    Index id = 0;
    for (int j = d - 1; j >= 0; --j) id = id * cells_per_axis_[j] + it[j];
    for (Index a : buckets_[static_cast<size_t>(id)]) {
      if ((pts_.col(a) - x).squaredNorm() <= r2) out.push_back(a);
    }
    int j = 0;
    for (; j < d; ++j) {
      if (++it[j] <= hi[j]) break;
      it[j] = lo[j];
    }
    if (j == d) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> PointSet::nearest(const Vector& x, Index k) const {
  if (empty() || k <= 0) return {};
  k = std::min(k, size());
  // Expanding radius search, then sort the hits by distance.
  Scalar r = std::max(cell_, 1e-30);
  std::vector<Index> hits;
  const Scalar reach = (pts_.colwise() - x).colwise().norm().maxCoeff();
  while (true) {
    hits = radius_query(x, r);
    if (static_cast<Index>(hits.size()) >= k || r > 2 * reach) break;
    r *= 2;
  }
  std::sort(hits.begin(), hits.end(), [&](Index a, Index b) {
    return (pts_.col(a) - x).squaredNorm() < (pts_.col(b) - x).squaredNorm();
  });
  if (static_cast<Index>(hits.size()) > k) hits.resize(static_cast<size_t>(k));
  return hits;
}

}  // namespace lme
