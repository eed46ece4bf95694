#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "core/fields.hpp"
#include "core/sphere_mesh.hpp"

using namespace hypcmc;

namespace {
constexpr double kPi = std::numbers::pi;

double cap_area(double eps) { return 2 * kPi * (1 - eps); }

void check_invariants(const SphericalMesh& m) {
  for (const auto& v : m.vertices) {
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    CHECK(v.z() > 0.0);
  }
  // Edge sharing counts.
  for (const auto& e : m.edges) {
    CHECK(e.t0 >= 0);
    if (e.boundary())
      CHECK(e.t1 == -1);
    else
      CHECK(e.t1 >= 0);
  }
  // Positive oriented areas.
  for (double a : m.tri_area) CHECK(a > 0);
  // Each boundary vertex sits in exactly one loop.
  std::set<int> in_loops;
  for (const auto& loop : m.boundary_loops)
    for (int v : loop) {
      CHECK(in_loops.count(v) == 0);
      in_loops.insert(v);
    }
  CHECK(in_loops.size() == m.boundary_vertices().size());
}
}  // namespace

TEST_CASE("cap mesh area approaches the analytic value") {
  // Analytic oracle: integral of dz over {y > eps} equals 2 pi (1 - eps).
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.5, 5));
  check_invariants(m);
  CHECK(m.total_area() == doctest::Approx(cap_area(0.5)).epsilon(0.005));
  for (int b : m.boundary_vertices()) CHECK(std::abs(m.y(b) - 0.5) <= 1e-12);
}

TEST_CASE("tiny cap at eps=0.999 stays valid and contained") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.999, 0));
  check_invariants(m);
  CHECK(m.triangle_count() >= 1);
  for (int i = 0; i < m.vertex_count(); ++i) CHECK(m.y(i) >= 0.999 - 1e-12);
}

TEST_CASE("geodesic ball area matches 2 pi (1 - cos rho)") {
  const SphericalMesh m =
      build_mesh(DomainSpec::geodesic_ball(Vec3(0, 0, 1), 0.4, 4));
  check_invariants(m);
  CHECK(m.total_area() ==
        doctest::Approx(2 * kPi * (1 - std::cos(0.4))).epsilon(0.005));
}

TEST_CASE("off-center geodesic ball builds and validates containment") {
  const Vec3 c = Vec3(0.3, 0.1, 1.0).normalized();
  const SphericalMesh m = build_mesh(DomainSpec::geodesic_ball(c, 0.3, 3));
  check_invariants(m);
  CHECK_THROWS_AS(build_mesh(DomainSpec::geodesic_ball(Vec3(1, 0, 0.02), 0.5, 2)),
                  Error);
}

TEST_CASE("domain parameter validation") {
  CHECK_THROWS_AS(DomainSpec::cap(0.0, 1), Error);
  CHECK_THROWS_AS(DomainSpec::cap(1.0, 1), Error);
  CHECK_THROWS_AS(DomainSpec::cap(-0.2, 1), Error);
  CHECK_THROWS_AS(DomainSpec::cap(0.5, -1), Error);
}

TEST_CASE("refinement: counts, projection and area improvement") {
  const SphericalMesh m0 = build_mesh(DomainSpec::cap(0.5, 2));
  const SphericalMesh m1 = refine(m0);
  check_invariants(m1);
  CHECK(m1.triangle_count() == 4 * m0.triangle_count());

  const double e0 = std::abs(m0.total_area() - cap_area(0.5));
  const double e1 = std::abs(m1.total_area() - cap_area(0.5));
  CHECK(e1 < e0);

  // Refining the refinement composes.
  const SphericalMesh m2 = refine(m1);
  CHECK(m2.triangle_count() == 16 * m0.triangle_count());
  const double e2 = std::abs(m2.total_area() - cap_area(0.5));
  CHECK(e2 < e1);

  // Boundary midpoints land on the exact circle.
  for (int b : m1.boundary_vertices()) CHECK(std::abs(m1.y(b) - 0.5) <= 1e-12);
}

TEST_CASE("ball refinement snaps boundary midpoints onto the geodesic circle") {
  const Vec3 c = Vec3(0.1, -0.2, 1.0).normalized();
  const SphericalMesh m0 = build_mesh(DomainSpec::geodesic_ball(c, 0.35, 2));
  const SphericalMesh m1 = refine(m0);
  for (int b : m1.boundary_vertices())
    CHECK(std::abs(arc_length(m1.vertices[b], c) - 0.35) <= 1e-12);
}

TEST_CASE("boundary distance: pole value, zero on boundary, Lipschitz") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.5, 5));
  const std::vector<double> d = boundary_distance_values(m);

  for (int b : m.boundary_vertices()) CHECK(d[b] == 0.0);

  const int pole = m.nearest_vertex(Vec3(0, 0, 1));
  const double exact = std::acos(0.5);
  CHECK(d[pole] == doctest::Approx(exact).epsilon(0.02));

  for (const auto& e : m.edges)
    CHECK(std::abs(d[e.a] - d[e.b]) <= e.arc + 1e-12);
}

TEST_CASE("boundary distance converges under refinement") {
  double prev_err = 1.0;
  for (int level : {3, 4, 5}) {
    const SphericalMesh m = build_mesh(DomainSpec::cap(0.6, level));
    const std::vector<double> d = boundary_distance_values(m);
    const int pole = m.nearest_vertex(Vec3(0, 0, 1));
    const double err = std::abs(d[pole] - std::acos(0.6));
    CHECK(err < prev_err + 1e-12);
    prev_err = err;
  }
  CHECK(prev_err <= 0.02 * std::acos(0.6));
}

TEST_CASE("boundary distance increases along meridians toward the pole") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, 4));
  const std::vector<double> d = boundary_distance_values(m);
  const double band = m.max_edge_arc();
  for (double az0 : {0.0, 1.1, 2.3, 4.0}) {
    // Collect vertices near the meridian plane, order by colatitude.
    std::vector<std::pair<double, int>> strip;
    for (int i = 0; i < m.vertex_count(); ++i) {
      const double az = std::atan2(m.vertices[i].y(), m.vertices[i].x());
      double diff = std::abs(az - az0);
      diff = std::min(diff, 2 * kPi - diff);
      if (diff < band) strip.push_back({std::acos(m.y(i)), i});
    }
    std::sort(strip.begin(), strip.end());
    // Toward the pole (decreasing colatitude) the distance must not drop by
    // more than a small discretization slack.
    for (size_t k = 1; k < strip.size(); ++k)
      CHECK(d[strip[k - 1].second] >= d[strip[k].second] - 0.25 * band);
  }
}

TEST_CASE("empty boundary is rejected") {
  const SphericalMesh sphere = make_icosphere(2);
  CHECK_THROWS_AS(boundary_distance_values(sphere), Error);
}

TEST_CASE("mesh export format") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.8, 1));
  const std::string text = m.export_string();
  std::istringstream is(text);
  int nv, nt;
  is >> nv >> nt;
  CHECK(nv == m.vertex_count());
  CHECK(nt == m.triangle_count());
  for (int i = 0; i < nv; ++i) {
    double x, y, z;
    int flag;
    is >> x >> y >> z >> flag;
    CHECK(std::abs(x - m.vertices[i].x()) <= 1e-15);
    CHECK(flag == (m.is_boundary(i) ? 1 : 0));
  }
  for (int t = 0; t < nt; ++t) {
    int a, b, c;
    is >> a >> b >> c;
    CHECK(a == m.triangles[t][0]);
  }
  // Deterministic: two exports agree byte for byte.
  CHECK(text == m.export_string());
}

TEST_CASE("spherical primitives") {
  CHECK(arc_length(Vec3(1, 0, 0), Vec3(0, 1, 0)) == doctest::Approx(kPi / 2));
  // Octant triangle has excess pi/2.
  CHECK(spherical_triangle_area(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)) ==
        doctest::Approx(kPi / 2));
  // Orientation flip changes the sign.
  CHECK(spherical_triangle_area(Vec3(0, 1, 0), Vec3(1, 0, 0), Vec3(0, 0, 1)) ==
        doctest::Approx(-kPi / 2));
}
