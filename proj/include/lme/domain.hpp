#pragma once

#include <vector>

#include "lme/types.hpp"

namespace lme {

// Half-space {x : <normal, x> <= offset}; normal has unit length.
struct Halfspace {
  Vector normal;
  Scalar offset = 0;
};

/// Axis-aligned box or bounded convex polytope given as a half-space list.
/// Immutable after construction; all queries are const.
class Domain {
 public:
  enum class Kind { kBox, kPolytope };

  static Domain box(const Vector& lo, const Vector& hi);
  static Domain unit_box(int dim);
  /// One half-space per row of `normals` (unit length within 1e-12).
  /// Construction fails unless the intersection is bounded with
  /// nonempty interior.
  static Domain polytope(const Matrix& normals, const Vector& offsets);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lo_.size()); }

  const Vector& bbox_lo() const { return lo_; }
  const Vector& bbox_hi() const { return hi_; }
  Scalar diameter() const { return (hi_ - lo_).norm(); }

  bool contains(const Vector& x, Scalar tol = 1e-12) const;

  /// Minimum face slack. Equals dist(x, boundary) for x inside; negative
  /// (largest constraint violation) outside.
  Scalar boundary_margin(const Vector& x) const;

  /// Face list; boxes expand to their 2d axis faces.
  const std::vector<Halfspace>& faces() const { return faces_; }

  /// Polytope vertices (box corners for boxes), one per column.
  const Matrix& vertices() const { return vertices_; }

 private:
  Domain() = default;

  Kind kind_ = Kind::kBox;
  Vector lo_, hi_;  // bounding box
  std::vector<Halfspace> faces_;
  Matrix vertices_;
};

}  // namespace lme
