#include <doctest.h>

#include "lme/diagnostics.hpp"
#include "lme/generate.hpp"
#include "lme/verify.hpp"
#include "oracles.hpp"

using namespace lme;

namespace {

LmeParams params_at(Scalar h, Scalar gamma = 1.8) {
  LmeParams p;
  p.gamma = gamma;
  p.h = h;
  return p;
}

Matrix single_probe(std::initializer_list<Scalar> coords) {
  Matrix m(static_cast<Index>(coords.size()), 1);
  Index j = 0;
  for (const Scalar c : coords) m(j++, 0) = c;
  return m;
}

}  // namespace

TEST_CASE("consistency suite: uniform 1d grid and jittered 2d set") {
  {
    const Domain dom = Domain::unit_box(1);
    const PointSet p = generate_grid_points(dom, 0.1, 0.0);
    const Matrix probes = random_interior_probes(dom, 20, 0.2, 1);
    const auto rep = check_consistency_suite(p, params_at(0.1), probes);
    CHECK(rep.pass);
    CHECK(rep.vacuous == 0);
    CHECK(rep.worst_partition <= 1e-12);
    CHECK(rep.worst_first_moment <= 1e-10 * 0.1);
    CHECK(rep.worst_gradient_sum <= 1e-8 / 0.1);
    CHECK(rep.worst_gradient_moment <= 1e-8);
  }
  {
    const Domain dom = Domain::unit_box(2);
    const PointSet p = generate_grid_points(dom, 0.15, 0.35, 5);
    const Matrix probes = random_interior_probes(dom, 50, 0.3, 2);
    const auto rep = check_consistency_suite(p, params_at(0.15), probes);
    CHECK(rep.pass);
  }
}

TEST_CASE("consistency suite: single node is vacuous for gradients") {
  Matrix pts(2, 1);
  pts << 0.5, 0.5;
  const PointSet p{pts};
  const auto rep =
      check_consistency_suite(p, params_at(0.2), single_probe({0.5, 0.5}));
  CHECK(rep.pass);
  CHECK(rep.vacuous == 1);
  CHECK(rep.worst_partition == 0.0);
}

TEST_CASE("consistency suite: injected corruption must fail") {
  const Domain dom = Domain::unit_box(1);
  const PointSet p = generate_grid_points(dom, 0.1, 0.0);
  const Matrix probes = random_interior_probes(dom, 10, 0.2, 3);
  ConsistencyOptions opts;
  opts.inject_weight_error = 1e-6;
  const auto rep = check_consistency_suite(p, params_at(0.1), probes, opts);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("decay: floor at s = 1 and stability on the 1d grid") {
  const Domain dom = Domain::unit_box(1);
  const Matrix probes = random_interior_probes(dom, 30, 0.25, 4);

  // The nearest node carries O(1) weight at O(h) distance, so the measured
  // constant can never drop below 1.
  const PointSet coarse = generate_grid_points(dom, 0.2, 0.0);
  CHECK(check_decay(coarse, params_at(0.2), 1.0, probes).measured_c >= 1.0);

  std::vector<Scalar> series;
  for (const Scalar h : {0.2, 0.1, 0.05}) {
    const PointSet p = generate_grid_points(dom, h, 0.0);
    const Matrix level_probes = random_interior_probes(dom, 30, 2 * h, 4);
    const auto rep = check_decay(p, params_at(h), 3.0, level_probes);
    CHECK(rep.s == 3.0);
    REQUIRE(rep.per_h.size() == 1);
    series.push_back(rep.measured_c);
  }
  for (const Scalar c : series) {
    CHECK(c <= 1.5 * series.front());
    CHECK(c >= series.front() / 1.5);
  }
}

TEST_CASE("decay: raising s keeps the constant finite") {
  const Domain dom = Domain::unit_box(2);
  const PointSet p = generate_grid_points(dom, 0.2, 0.0);
  const Matrix probes = random_interior_probes(dom, 20, 0.4, 6);
  Scalar prev = 0;
  for (const Scalar s : {1.0, 2.0, 4.0, 8.0}) {
    const Scalar c = check_decay(p, params_at(0.2), s, probes).measured_c;
    CHECK(std::isfinite(c));
    CHECK(c >= prev);  // heavier polynomial weight, larger sup
    prev = c;
  }
}

TEST_CASE("concentration: trivial theta and the 1e-8 radius") {
  const Domain dom = Domain::unit_box(2);
  const Matrix probes = random_interior_probes(dom, 25, 0.3, 8);
  const PointSet p = generate_grid_points(dom, 0.1, 0.0);
  CHECK(check_concentration(p, params_at(0.1), 1.0, probes) == 1);

  std::vector<int> c_theta;
  for (const Scalar h : {0.2, 0.1, 0.05}) {
    const PointSet level = generate_grid_points(dom, h, 0.0);
    const Matrix level_probes = random_interior_probes(dom, 25, 2 * h, 8);
    c_theta.push_back(
        check_concentration(level, params_at(h), 1e-8, level_probes));
  }
  for (const int c : c_theta) {
    CHECK(c <= 6);
    CHECK(std::abs(c - c_theta.front()) <= 1);
  }
}

TEST_CASE("dual bounds: symmetric probe contributes zero multiplier") {
  Matrix pts(1, 2);
  pts << 0.0, 1.0;
  const PointSet p{pts};
  const auto bounds =
      check_dual_bounds(p, params_at(1.0), 0.5, single_probe({0.5}));
  REQUIRE(bounds.size() == 4);
  CHECK(bounds[0].kind == BoundReport::Kind::kLambda);
  CHECK(bounds[0].measured <= 1e-12);
  CHECK(bounds[1].kind == BoundReport::Kind::kZLow);
  CHECK(bounds[2].kind == BoundReport::Kind::kZHigh);
  CHECK(bounds[3].kind == BoundReport::Kind::kJInv);
  CHECK(bounds[3].normalized() > 0);
}

TEST_CASE("dual bounds: optimal Z never exceeds the lambda = 0 value") {
  const Domain dom = Domain::unit_box(2);
  const Scalar h = 0.1;
  const PointSet p = generate_grid_points(dom, h, 0.3, 11);
  const LmeParams prm = params_at(h);
  const Matrix probes = random_interior_probes(dom, 40, 2 * h, 12);
  Scalar c_z = 0;
  for (Index c = 0; c < probes.cols(); ++c) {
    c_z = std::max(c_z, std::exp(log_partition(probes.col(c), Vector::Zero(2), p,
                                               prm)
                                     .log_z));
  }
  const auto bounds = check_dual_bounds(p, prm, 2.0, probes);
  CHECK(bounds[2].measured <= c_z * (1 + 1e-12));
  CHECK(bounds[1].measured > 0);
}

TEST_CASE("closed form 1d multiplier: midpoint zero and edge blow-up") {
  CHECK(closed_form_lambda_1d(0.5, 0.0, 1.0, 1.8) == 0.0);
  // Monotone divergence toward the left node.
  Scalar prev = closed_form_lambda_1d(0.2, 0.0, 1.0, 1.8);
  for (const Scalar x : {0.1, 0.01, 1e-4, 1e-8}) {
    const Scalar lam = closed_form_lambda_1d(x, 0.0, 1.0, 1.8);
    CHECK(lam > prev);
    prev = lam;
  }
  CHECK(prev > 1e1);
  CHECK_THROWS_AS(closed_form_lambda_1d(1.5, 0.0, 1.0, 1.8), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_lambda_1d(0.0, 0.0, 1.0, 1.8), std::invalid_argument);

  // Newton agrees with it (a=0.3, h=0.4 two-node set).
  Matrix pts(1, 2);
  pts << 0.3, 0.7;
  const PointSet p{pts};
  for (int k = 1; k <= 20; ++k) {
    const Scalar x = 0.3 + 0.4 * static_cast<Scalar>(k) / 21.0;
    const auto sol = solve_dual(single_probe({x}).col(0), p, params_at(0.4));
    REQUIRE(sol.status == SolveStatus::kConverged);
    CHECK(std::abs(sol.lambda_star[0] - closed_form_lambda_1d(x, 0.3, 0.4, 1.8)) *
              0.4 <=
          1e-8);
  }
}

TEST_CASE("boundary gap: violating sets are rejected with a clear message") {
  const Domain dom = Domain::unit_box(2);
  Matrix pts(2, 5);
  pts << 0.0, 1.0, 0.5, 0.013, 0.6,
         0.0, 1.0, 0.5, 0.5, 0.0;
  const PointSet p{pts};
  CHECK_THROWS_WITH_AS(require_boundary_gap(p, dom, 0.05),
                       doctest::Contains("gap"), std::invalid_argument);
  CHECK_NOTHROW(require_boundary_gap(p, dom, 0.01));

  // Generated sets satisfy their own gap by construction.
  const PointSet gen = generate_grid_points(dom, 0.15, 0.4, 17);
  CHECK_NOTHROW(require_boundary_gap(gen, dom, 0.5 * 0.15 / std::sqrt(2.0)));
}

TEST_CASE("boundary probe: scalings on the unit square") {
  const Domain dom = Domain::unit_box(2);
  const Scalar h = 0.1;
  const PointSet p = generate_grid_points(dom, h, 0.0);
  std::vector<Scalar> rho_list;
  for (int i = 0; i < 10; ++i) {
    rho_list.push_back(0.5 * h * std::pow(2e-3, i / 9.0));
  }
  const auto rep =
      boundary_scaling_probe(dom, 0, p, params_at(h), rho_list);

  REQUIRE(rep.rho_list.size() == 10);
  CHECK(rep.non_converged == 0);

  // The rotation is orthogonal and sends the inward normal to axis 1.
  CHECK((rep.rotation * rep.rotation.transpose() - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);
  Vector inward(2);
  inward << 1.0, 0.0;  // face 0 of the unit box is x1 = 0
  CHECK(((rep.rotation * inward) - Vector::Unit(2, 0)).norm() <= 1e-14);

  // J*_11 ~ rho, multiplier blow-up with rho*lambda1 -> 0, tangential block
  // bounded below.
  REQUIRE(rep.j11_vs_rho.has_value());
  CHECK(*rep.j11_vs_rho >= 0.8);
  CHECK(*rep.j11_vs_rho <= 1.2);
  for (size_t i = 1; i < rep.lambda1.size(); ++i) {
    CHECK(rep.lambda1[i] > rep.lambda1[i - 1]);
  }
  CHECK(rep.rho_lambda1.back() < 0.1);
  for (const Scalar b : rep.b_min_eig) {
    CHECK(b >= 0.25 * rep.b_min_eig.front());
  }
  // Tensor-product lattice: separable weights keep the cross moments at the
  // round-off floor.
  for (const Scalar v : rep.j1j_max) CHECK(v <= 1e-14 * h * h);
}

TEST_CASE("boundary probe: jittered set exercises the cross-moment decay") {
  const Domain dom = Domain::unit_box(2);
  const Scalar h = 0.1;
  const PointSet p = generate_grid_points(dom, h, 0.3, 29);
  std::vector<Scalar> rho_list;
  for (int i = 0; i < 10; ++i) {
    rho_list.push_back(0.5 * h * std::pow(2e-3, i / 9.0));
  }
  const auto rep = boundary_scaling_probe(dom, 0, p, params_at(h), rho_list);
  REQUIRE(rep.rho_list.size() >= 8);

  // |J*_1j| rho^{-1/4} stays bounded: the fitted decay clears exponent 1/4.
  REQUIRE(rep.j1j_vs_rho.has_value());
  CHECK(*rep.j1j_vs_rho >= 0.25);
  // Values below the floor are excluded and logged, not failed.
  std::vector<Scalar> with_tiny = rho_list;
  with_tiny.push_back(1e-9 * h);
  const auto rep2 = boundary_scaling_probe(dom, 0, p, params_at(h), with_tiny);
  CHECK(rep2.excluded_rhos == 1);
}

TEST_CASE("boundary probe: input validation") {
  const Domain dom = Domain::unit_box(2);
  const PointSet p = generate_grid_points(dom, 0.1, 0.0);
  CHECK_THROWS_AS(
      boundary_scaling_probe(dom, 99, p, params_at(0.1), {0.05}),
      std::invalid_argument);
  const Domain line = Domain::unit_box(1);
  const PointSet p1 = generate_grid_points(line, 0.1, 0.0);
  CHECK_THROWS_AS(boundary_scaling_probe(line, 0, p1, params_at(0.1), {0.05}),
                  std::invalid_argument);
}

TEST_CASE("far-node gradients: empty set, monotonicity, threshold stability") {
  const Domain dom = Domain::unit_box(2);
  std::vector<int> r0;
  for (const Scalar h : {0.1, 0.05}) {
    const PointSet p = generate_grid_points(dom, h, 0.0);
    const LmeParams prm = params_at(h);
    const Matrix probes = near_vertex_probes(dom, h, {0.15, 0.35, 0.6});

    // No node sits deeper than the domain half-width.
    CHECK(far_node_gradient_check(dom, p, prm, 0.51 / h, 2.0, probes) == 0.0);

    Scalar prev = std::numeric_limits<Scalar>::infinity();
    for (const Scalar r : {1.0, 2.0, 3.0, 4.0}) {
      const Scalar v = far_node_gradient_check(dom, p, prm, r, 2.0, probes);
      CHECK(v <= prev);
      prev = v;
    }
    r0.push_back(measure_far_node_threshold(dom, p, prm, 2.0, probes));
    CHECK(far_node_gradient_check(dom, p, prm, static_cast<Scalar>(r0.back()),
                                  2.0, probes) <= 1.0);
  }
  CHECK(std::abs(r0[0] - r0[1]) <= 1);
}

TEST_CASE("verification suite: passes by default, fails under fault injection") {
  RunConfig cfg;
  cfg.dim = 1;
  cfg.h_list = {0.2, 0.1, 0.05};
  cfg.probes = 60;
  const auto rep = run_verification_suite(cfg);
  CHECK(rep.all_pass());
  const auto j = rep.to_json();
  CHECK(j["pass"] == true);
  REQUIRE(j["checks"].size() == 5);
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("check"));
    CHECK(c.contains("params"));
    CHECK(c.contains("measured"));
    CHECK(c.contains("pass"));
  }

  RunConfig bad = cfg;
  bad.inject_fault = true;
  CHECK_FALSE(run_verification_suite(bad).all_pass());
}
