#include <doctest.h>

#include <set>

#include "lme/domain.hpp"
#include "lme/generate.hpp"
#include "lme/io.hpp"
#include "lme/point_set.hpp"
#include "lme/regularity.hpp"
#include "lme/simplex.hpp"
#include "oracles.hpp"

using namespace lme;

namespace {

PointSet from_coords(std::initializer_list<Scalar> coords) {
  Matrix pts(1, static_cast<Index>(coords.size()));
  Index a = 0;
  for (const Scalar c : coords) pts(0, a++) = c;
  return PointSet(pts);
}

Vector vec1(Scalar x) {
  Vector v(1);
  v << x;
  return v;
}

Vector vec2(Scalar x, Scalar y) {
  Vector v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("grid generation: 1d lattice hits the documented coordinates") {
  const PointSet p = generate_grid_points(Domain::unit_box(1), 0.25, 0.0);
  REQUIRE(p.size() == 5);
  for (Index a = 0; a < 5; ++a) {
    CHECK(p.point(a)[0] == 0.25 * static_cast<Scalar>(a));
  }
}

TEST_CASE("grid generation: box corners are always populated") {
  const PointSet p = generate_grid_points(Domain::unit_box(2), 0.15, 0.0);
  for (const Scalar cx : {0.0, 1.0}) {
    for (const Scalar cy : {0.0, 1.0}) {
      bool found = false;
      for (Index a = 0; a < p.size(); ++a) {
        found = found || (p.point(a) - vec2(cx, cy)).norm() < 1e-15;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("grid generation: jitter stays bounded, endpoints exact") {
  const Scalar h = 0.25, jitter = 0.2;
  const PointSet p = generate_grid_points(Domain::unit_box(1), h, jitter, 7);
  const PointSet ref = generate_grid_points(Domain::unit_box(1), h, 0.0);
  REQUIRE(p.size() == ref.size());
  for (Index a = 0; a < p.size(); ++a) {
    CHECK(std::abs(p.point(a)[0] - ref.point(a)[0]) <= jitter * h + 1e-15);
  }
  CHECK(p.point(0)[0] == 0.0);
  CHECK(p.point(p.size() - 1)[0] == 1.0);
}

TEST_CASE("grid generation: deterministic bit for bit") {
  const Domain dom = Domain::unit_box(2);
  const PointSet a = generate_grid_points(dom, 0.1, 0.0);
  const PointSet b = generate_grid_points(dom, 0.1, 0.0);
  CHECK(a.points() == b.points());
  const PointSet c = generate_grid_points(dom, 0.1, 0.3, 42);
  const PointSet d = generate_grid_points(dom, 0.1, 0.3, 42);
  CHECK(c.points() == d.points());
  const PointSet e = generate_grid_points(dom, 0.1, 0.3, 43);
  CHECK(c.points() != e.points());
}

TEST_CASE("grid generation: no node inside the boundary gap band") {
  const Domain dom = Domain::unit_box(2);
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    const Scalar h = 0.17;
    const PointSet p = generate_grid_points(dom, h, 0.45, seed);
    const Scalar gap = 0.5 * h / std::sqrt(2.0);
    for (Index a = 0; a < p.size(); ++a) {
      const Scalar m = dom.boundary_margin(p.point(a));
      CHECK((m <= 1e-12 || m >= gap - 1e-12));
    }
  }
}

TEST_CASE("h-density: documented 1d counts") {
  const PointSet p = from_coords({0, 0.25, 0.5, 0.75, 1.0});
  CHECK(h_density_bound(p, 0.25, p.points()) == 3);
  const PointSet single = from_coords({0});
  CHECK(h_density_bound(single, 10.0, single.points()) == 1);
}

TEST_CASE("h-density: matches a brute-force double loop on random sets") {
  auto eng = oracles::rng(11);
  Matrix pts(2, 60);
  for (Index a = 0; a < pts.cols(); ++a) {
    pts.col(a) = oracles::random_point(eng, 2, 0.0, 1.0);
  }
  const PointSet p{pts};
  const Scalar h = 0.3;
  int brute = 0;
  for (Index a = 0; a < p.size(); ++a) {
    int n = 0;
    for (Index b = 0; b < p.size(); ++b) {
      if ((p.point(a) - p.point(b)).norm() <= h) ++n;
    }
    brute = std::max(brute, n);
  }
  CHECK(h_density_bound(p, h, Matrix(2, 0)) == brute);
}

TEST_CASE("covering check: 1d gap analysis") {
  const Domain dom = Domain::unit_box(1);
  const PointSet p = from_coords({0, 0.25, 0.5, 0.75, 1.0});
  const Matrix probes = lattice_probes(dom, 0.3 / 4);
  const auto good = verify_h_covering(p, dom, 0.3, probes);
  CHECK(good.covering_ok);
  CHECK(good.max_simplex_size == doctest::Approx(0.25));
  CHECK(good.tau_hat >= 1);

  const PointSet sparse = from_coords({0, 1.0});
  const auto bad = verify_h_covering(sparse, dom, 0.5, probes);
  CHECK_FALSE(bad.covering_ok);
}

TEST_CASE("covering check: 2d grid with h above the cell diagonal") {
  const Domain dom = Domain::unit_box(2);
  const Scalar h = 0.2;
  const PointSet p = generate_grid_points(dom, h, 0.0);
  const Matrix probes = lattice_probes(dom, h / 4);
  // Cells have diagonal h, so simplices of size just above h exist anywhere.
  const auto rep = verify_h_covering(p, dom, 1.0001 * h, probes);
  CHECK(rep.covering_ok);
  CHECK(rep.max_simplex_size <= 1.0001 * h);
  // Far below the lattice resolution nothing can cover.
  const auto fail = verify_h_covering(p, dom, 0.4 * h, probes);
  CHECK_FALSE(fail.covering_ok);
  CHECK(fail.first_failing_probe.has_value());
}

TEST_CASE("ring count: documented 1d values") {
  const PointSet p = from_coords({0, 0.25, 0.5, 0.75, 1.0});
  CHECK(ring_count(p, vec1(0.5), 0.25, 1) == 1);
  CHECK(ring_count(p, vec1(0.5), 0.25, 2) == 2);
}

TEST_CASE("ring count: brute force agreement and growth bound") {
  const Domain dom = Domain::unit_box(2);
  const PointSet p = generate_grid_points(dom, 0.1, 0.0);
  auto eng = oracles::rng(5);

  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = oracles::random_point(eng, 2, 0.0, 1.0);
    const Scalar h = oracles::uniform(eng, 0.05, 0.3);
    int total = 0;
    for (int t = 1; t <= 8; ++t) {
      int brute = 0;
      for (Index a = 0; a < p.size(); ++a) {
        const Scalar dist = (p.point(a) - x).norm();
        if (dist >= (t - 1) * h && dist < t * h) ++brute;
      }
      const int rc = ring_count(p, x, h, t);
      CHECK(rc == brute);
      total += rc;
    }
    // Rings partition the ball of radius 8h.
    int ball = 0;
    for (Index a = 0; a < p.size(); ++a) {
      if ((p.point(a) - x).norm() < 8 * h) ++ball;
    }
    CHECK(total == ball);
  }

  // Ring population grows no faster than t^{d-1}: calibrate the constant on
  // t <= 3 and check it out to t = 20.
  const Scalar h = 0.1;
  Scalar c_hat = 0;
  const Vector center = vec2(0.5, 0.5);
  for (int t = 1; t <= 3; ++t) {
    c_hat = std::max(c_hat, static_cast<Scalar>(ring_count(p, center, h, t)) /
                                static_cast<Scalar>(t));
  }
  for (int t = 1; t <= 20; ++t) {
    CHECK(static_cast<Scalar>(ring_count(p, center, h, t)) <=
          c_hat * static_cast<Scalar>(t) + 1e-9);
  }
}

TEST_CASE("neighbors_within: edge radii and brute-force agreement") {
  const Domain dom = Domain::unit_box(2);
  const PointSet p = generate_grid_points(dom, 0.2, 0.0);

  const auto all = neighbors_within(p, vec2(0.4, 0.7),
                                    std::numeric_limits<Scalar>::infinity());
  CHECK(static_cast<Index>(all.size()) == p.size());

  const auto self = neighbors_within(p, Vector(p.point(3)), 0.0);
  REQUIRE(self.size() == 1);
  CHECK(self[0] == 3);

  auto eng = oracles::rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = oracles::random_point(eng, 2, -0.2, 1.2);
    const Scalar radius = oracles::uniform(eng, 0.0, 0.8);
    CHECK(neighbors_within(p, x, radius) ==
          oracles::brute_force_neighbors(p, x, radius));
  }
}

TEST_CASE("point set validation") {
  Matrix dup(1, 2);
  dup << 0.5, 0.5 + 1e-14;
  CHECK_THROWS_AS(PointSet{dup}, std::invalid_argument);

  Matrix nan(1, 1);
  nan << std::numeric_limits<Scalar>::quiet_NaN();
  CHECK_THROWS_AS(PointSet{nan}, std::invalid_argument);

  Matrix high(4, 2);
  high.setZero();
  high(0, 1) = 1;
  CHECK_THROWS_AS(PointSet{high}, std::invalid_argument);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(Domain::box(Vector::Zero(1), Vector::Zero(1)),
                  std::invalid_argument);

  // Strip open toward -y: unbounded.
  Matrix normals(3, 2);
  normals << 1, 0,
             -1, 0,
             0, 1;
  Vector offsets(3);
  offsets << 1, 0, 1;
  CHECK_THROWS_WITH_AS(Domain::polytope(normals, offsets),
                       doctest::Contains("unbounded"), std::invalid_argument);

  // Non-unit normal.
  Matrix bad(3, 2);
  bad << 2, 0, 0, 1, -1, -1;
  Vector b3 = Vector::Ones(3);
  CHECK_THROWS_WITH_AS(Domain::polytope(bad, b3), doctest::Contains("unit"),
                       std::invalid_argument);

  // Proper triangle: x >= 0, y >= 0, x + y <= 1.
  Matrix tri(3, 2);
  const Scalar s2 = 1.0 / std::sqrt(2.0);
  tri << -1, 0, 0, -1, s2, s2;
  Vector off(3);
  off << 0, 0, s2;
  const Domain t = Domain::polytope(tri, off);
  CHECK(t.contains(vec2(0.2, 0.2)));
  CHECK_FALSE(t.contains(vec2(0.8, 0.8)));
  CHECK(t.boundary_margin(vec2(0.1, 0.4)) == doctest::Approx(0.1));
  CHECK(t.vertices().cols() == 3);
  CHECK(t.bbox_hi()[0] == doctest::Approx(1.0));
}

TEST_CASE("simplex containment counts faces as inside") {
  Matrix verts(2, 3);
  verts << 0, 1, 0,
           0, 0, 1;
  CHECK(simplex_contains(verts, vec2(0.25, 0.25)));
  CHECK(simplex_contains(verts, vec2(0.5, 0.5)));   // hypotenuse
  CHECK(simplex_contains(verts, vec2(0.0, 0.0)));   // vertex
  CHECK_FALSE(simplex_contains(verts, vec2(0.51, 0.51)));
  CHECK_FALSE(simplex_contains(verts, vec2(-0.01, 0.2)));
}

TEST_CASE("enclosing ball diameters are exact for known shapes") {
  Matrix seg(1, 2);
  seg << 0.2, 0.9;
  CHECK(enclosing_ball_diameter(seg) == doctest::Approx(0.7));

  // Right triangle: hypotenuse is the diameter.
  Matrix right(2, 3);
  right << 0, 1, 0,
           0, 0, 1;
  CHECK(enclosing_ball_diameter(right) == doctest::Approx(std::sqrt(2.0)));

  // Equilateral triangle with side 1: circumdiameter 2/sqrt(3).
  Matrix equi(2, 3);
  equi << 0, 1, 0.5,
          0, 0, std::sqrt(3.0) / 2;
  CHECK(enclosing_ball_diameter(equi) == doctest::Approx(2.0 / std::sqrt(3.0)));

  // Regular tetrahedron with side 1: circumdiameter sqrt(3/2).
  Matrix tet(3, 4);
  tet << 0, 1, 0.5, 0.5,
         0, 0, std::sqrt(3.0) / 2, std::sqrt(3.0) / 6,
         0, 0, 0, std::sqrt(6.0) / 3;
  CHECK(enclosing_ball_diameter(tet) == doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("point-set files round trip through csv and json") {
  const PointSet p = generate_grid_points(Domain::unit_box(2), 0.3, 0.25, 99);

  const PointSet via_csv = pointset_from_csv(pointset_to_csv(p));
  REQUIRE(via_csv.size() == p.size());
  CHECK((via_csv.points() - p.points()).cwiseAbs().maxCoeff() == 0.0);

  const PointSet via_json = pointset_from_json(pointset_to_json(p));
  REQUIRE(via_json.size() == p.size());
  CHECK((via_json.points() - p.points()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(pointset_from_csv("0.5,0.5\n"), IoError);
  CHECK_THROWS_AS(pointset_from_csv("# d=2\n0.5\n"), IoError);
  CHECK_THROWS_AS(pointset_from_csv("# d=2\n0.5,abc\n"), IoError);
}
