#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "core/geometry.hpp"
#include "core/sphere_mesh.hpp"

using namespace hypcmc;

TEST_CASE("exact solution profile values") {
  // At y = 1 the profile is log(1 - H) for every H.
  for (double H : {-0.9, -0.5, 0.0, 0.3, 0.7}) {
    const ExactEquidistantSolution sol(H, 0.0);
    CHECK(sol.profile(1.0) == doctest::Approx(std::log(1.0 - H)).epsilon(1e-14));
  }
  // H = 0 collapses to the constant c.
  const ExactEquidistantSolution flat(0.0, 1.7);
  for (double y : {0.1, 0.5, 0.9}) CHECK(flat.profile(y) == doctest::Approx(1.7));

  // Direct evaluation at H = 0.5, y = 0.6 (cross-checked by the curvature
  // test below, which recovers H ~ 0.5 from this very field).
  const ExactEquidistantSolution sol(0.5, 0.0);
  CHECK(sol.profile(0.6) ==
        doctest::Approx(std::log(std::sqrt(0.25 * 0.36 + 0.75) - 0.3)).epsilon(1e-15));

  CHECK_THROWS_AS(ExactEquidistantSolution(1.0, 0.0), Error);
  CHECK_THROWS_AS(ExactEquidistantSolution(-1.2, 0.0), Error);
}

TEST_CASE("exact solution analytic slope and normal component") {
  // W = 1/Q and nu_vertical = Q y + H (1 - y^2), from differentiating the
  // profile: dv/dy = -H/Q, |grad v|^2 = (1 - y^2) (dv/dy)^2.
  const ExactEquidistantSolution sol(0.5, 0.0);
  for (double y : {0.2, 0.5, 0.9}) {
    const double Q = std::sqrt(0.25 * y * y + 0.75);
    const double dv = -0.5 / Q;
    const double W2 = 1.0 + (1.0 - y * y) * dv * dv;
    CHECK(sol.W(y) == doctest::Approx(std::sqrt(W2)).epsilon(1e-12));
    const double nu = (y - dv * (1.0 - y * y)) / std::sqrt(W2);
    CHECK(sol.nu_vertical(y) == doctest::Approx(nu).epsilon(1e-12));
  }
}

TEST_CASE("curvature conversion") {
  CHECK(curvature_convert(1.0, 0.0, 0.3) == 0.3);
  // Spheres around the origin are totally geodesic: u = rho y,
  // kappa_E = -1/rho, nu_vertical = y.
  for (double rho : {0.5, 1.0, 3.0})
    for (double y : {0.2, 0.8})
      CHECK(curvature_convert(rho * y, -1.0 / rho, y) == doctest::Approx(0.0));
  CHECK_THROWS_AS(curvature_convert(0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(curvature_convert(-1.0, 1.0, 0.0), Error);

  // Linearity in the Euclidean curvature argument.
  const double u = 0.7, k1 = 0.3, k2 = -1.1, nu = 0.25;
  CHECK(curvature_convert(u, 2.0 * k1 + 3.0 * k2, nu) ==
        doctest::Approx(2.0 * curvature_convert(u, k1, 0.0) +
                        3.0 * curvature_convert(u, k2, 0.0) + nu)
            .epsilon(1e-14));
}

TEST_CASE("exact solution satisfies H = u H_E + nu_vertical analytically") {
  // The graph is a Euclidean sphere of radius R = e^c centered at
  // (0,0,-H R); its Euclidean mean curvature with respect to the outward
  // normal is -1/R.
  for (double H : {-0.7, 0.2, 0.9}) {
    for (double c : {0.0, 0.4}) {
      const ExactEquidistantSolution sol(H, c);
      const double R = std::exp(c);
      for (double y : {0.15, 0.6, 1.0}) {
        const double u = std::exp(sol.profile(y)) * y;
        const double conv = curvature_convert(u, -1.0 / R, sol.nu_vertical(y));
        CHECK(conv == doctest::Approx(H).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("outward normals: constants give the position, unit by construction") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, 3));
  const ScalarField c(m.vertex_count(), 0.7);
  const auto nu = outward_normal(m, c);
  for (int i = 0; i < m.vertex_count(); ++i) {
    CHECK((nu[i] - m.vertices[i]).norm() <= 1e-13);
    CHECK(std::abs(nu[i].norm() - 1.0) <= 1e-14);
  }

  // Random field: unit exactly by construction.
  ScalarField v(m.vertex_count(), 0.0);
  for (int i = 0; i < m.vertex_count(); ++i) v[i] = std::sin(3 * m.y(i));
  for (const auto& n : outward_normal(m, v)) CHECK(std::abs(n.norm() - 1.0) <= 1e-14);
}

TEST_CASE("normal vertical component matches the analytic derivative") {
  const ExactEquidistantSolution sol(0.5, 0.0);
  double prev = 1.0;
  for (int level : {3, 4, 5}) {
    const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, level));
    const ScalarField v = exact_solution_eval(sol, m);
    const auto nu = outward_normal(m, v);
    double worst = 0;
    for (int i = 0; i < m.vertex_count(); ++i) {
      if (m.is_boundary(i)) continue;
      worst = std::max(worst, std::abs(nu[i].z() - sol.nu_vertical(m.y(i))));
    }
    CHECK(worst < prev);
    prev = worst;
  }
  // First-order recovery: well below the level-5 edge length ~0.035.
  CHECK(prev <= 2e-3);
}

TEST_CASE("slope field converges to the analytic W") {
  const ExactEquidistantSolution sol(-0.6, 0.0);
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, 5));
  const ScalarField W = slope_field(m, exact_solution_eval(sol, m));
  double worst = 0;
  for (int i = 0; i < m.vertex_count(); ++i) {
    if (m.is_boundary(i)) continue;
    worst = std::max(worst, std::abs(W[i] - sol.W(m.y(i))));
  }
  CHECK(worst <= 1e-2);
}

TEST_CASE("discrete mean curvature: constants are totally geodesic") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.3, 5));
  for (double c : {0.0, 0.8}) {
    const ScalarField v(m.vertex_count(), c);
    const ScalarField H = hyperbolic_mean_curvature(m, v);
    double worst = 0;
    for (int i = 0; i < m.vertex_count(); ++i)
      if (!m.is_boundary(i)) worst = std::max(worst, std::abs(H[i]));
    CHECK(worst <= 1e-2);
  }
}

TEST_CASE("discrete mean curvature recovers exact solutions, both signs") {
  for (double Hval : {0.5, -0.7}) {
    const ExactEquidistantSolution sol(Hval, 0.0);
    double prev = 1e9;
    for (int level : {4, 5}) {
      const SphericalMesh m = build_mesh(DomainSpec::cap(0.3, level));
      const ScalarField v = exact_solution_eval(sol, m);
      const ScalarField H = hyperbolic_mean_curvature(m, v);
      double worst = 0;
      for (int i = 0; i < m.vertex_count(); ++i)
        if (!m.is_boundary(i)) worst = std::max(worst, std::abs(H[i] - Hval));
      CHECK(worst < prev);
      prev = worst;
    }
    CHECK(prev <= 1e-2);
  }
}

TEST_CASE("mean curvature is invariant under constant shifts up to O(h)") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, 4));
  const ExactEquidistantSolution sol(0.4, 0.0);
  const ScalarField v = exact_solution_eval(sol, m);
  ScalarField vs = v;
  for (auto& x : vs.values) x += 1.3;  // scales the graph by e^{1.3}
  const ScalarField H1 = hyperbolic_mean_curvature(m, v);
  const ScalarField H2 = hyperbolic_mean_curvature(m, vs);
  double worst = 0;
  for (int i = 0; i < m.vertex_count(); ++i)
    if (!m.is_boundary(i)) worst = std::max(worst, std::abs(H1[i] - H2[i]));
  CHECK(worst <= 5.0 * m.max_edge_arc());
}

TEST_CASE("quadratic fit reproduces the operator residual of exact solutions") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, 5));
  const ExactEquidistantSolution sol(0.5, 0.0);
  const ScalarField v = exact_solution_eval(sol, m);
  const std::vector<double> d = boundary_distance_values(m);
  double worst = 0;
  for (int i = 0; i < m.vertex_count(); ++i) {
    if (m.is_boundary(i) || d[i] < 2.0 * m.max_edge_arc()) continue;
    worst = std::max(worst, std::abs(operator_residual_at(m, v.values, i, 2, 0.5)));
  }
  CHECK(worst <= 0.05);
}

TEST_CASE("field CSV export has the documented columns") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.8, 1));
  const ScalarField v(m.vertex_count(), 0.25);
  const std::string csv = field_csv_string(m, v);
  CHECK(csv.rfind("vertex_id,x,y,z,value\n", 0) == 0);
  size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == static_cast<size_t>(m.vertex_count()) + 1);
}
