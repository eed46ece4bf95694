#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "core/axisym.hpp"
#include "core/energy.hpp"

using namespace hypcmc;

namespace {
constexpr double kPi = std::numbers::pi;

ScalarField random_field(const SphericalMesh& m, unsigned seed, double amp = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-amp, amp);
  ScalarField v(m.vertex_count(), 0.0);
  for (auto& x : v.values) x = U(rng);
  return v;
}
}  // namespace

TEST_CASE("quadrature of the weights on the cap") {
  // Analytic: integral of y^{-2} over {y > eps} is 2 pi (1/eps - 1) and of
  // y^{-3} is pi (1/eps^2 - 1), by substituting y = cos(theta).
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.5, 5));
  const ScalarField zero(m.vertex_count(), 0.0);
  const ScalarField one(m.vertex_count(), 1.0);

  const EnergyBreakdown e0 = assemble_energy(m, zero, 2, 0.3);
  CHECK(e0.area == doctest::Approx(2 * kPi).epsilon(0.005));
  CHECK(e0.volume == doctest::Approx(0.0));

  const EnergyBreakdown e1 = assemble_energy(m, one, 2, 0.3);
  CHECK(e1.volume == doctest::Approx(3 * kPi).epsilon(0.005));

  // v = c scales the volume term linearly.
  ScalarField c(m.vertex_count(), -1.7);
  const EnergyBreakdown ec = assemble_energy(m, c, 2, 0.3);
  CHECK(ec.volume == doctest::Approx(-1.7 * 3 * kPi).epsilon(0.005));

  // H = 0: total equals the area term.
  const EnergyBreakdown eh = assemble_energy(m, zero, 2, 0.0);
  CHECK(eh.total == eh.area);

  // Generic n enters only the weights: n = 3 area of v = 0 equals the n = 2
  // volume weight k.
  const EnergyBreakdown e3 = assemble_energy(m, zero, 3, 0.0);
  CHECK(e3.area == doctest::Approx(3 * kPi).epsilon(0.005));
}

TEST_CASE("weight quadrature converges at second order") {
  double prev_a = 0, prev_k = 0;
  for (int level : {3, 4, 5}) {
    const SphericalMesh m = build_mesh(DomainSpec::cap(0.5, level));
    const EnergyAssembler asmb(m, 2);
    const double ea = std::abs(asmb.area_lower_bound() - 2 * kPi);
    const double ek = std::abs(asmb.volume_weight() - 3 * kPi);
    if (level > 3) {
      CHECK(prev_a / ea > 2.0);  // ~4 at second order
      CHECK(prev_k / ek > 2.0);
    }
    prev_a = ea;
    prev_k = ek;
  }
}

TEST_CASE("area term dominates its lower bound, equality at constants") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, 3));
  const EnergyAssembler asmb(m, 2);
  const ScalarField c(m.vertex_count(), 0.9);
  CHECK(asmb.energy(c, 0.0).area == doctest::Approx(asmb.area_lower_bound()));
  const ScalarField v = random_field(m, 7);
  CHECK(asmb.energy(v, 0.0).area > asmb.area_lower_bound());
}

TEST_CASE("gradient matches central finite differences") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.6, 2));
  const EnergyAssembler asmb(m, 2);
  const double H = 0.4;
  ScalarField v = random_field(m, 11);

  const std::vector<double> g = asmb.gradient(v, H);
  const double step = 1e-5;
  double worst_rel = 0;
  for (int i = 0; i < m.vertex_count(); ++i) {
    ScalarField vp = v, vm = v;
    vp[i] += step;
    vm[i] -= step;
    const double fd = (asmb.energy_total(vp, H) - asmb.energy_total(vm, H)) / (2 * step);
    worst_rel = std::max(worst_rel, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
  }
  CHECK(worst_rel <= 1e-6);
}

TEST_CASE("gradient at a constant field") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.5, 3));
  const EnergyAssembler asmb(m, 2);
  const ScalarField zero(m.vertex_count(), 0.0);

  // H = 0: exactly the zero vector (the area integrand derivative vanishes).
  for (double gi : asmb.gradient(zero, 0.0)) CHECK(gi == 0.0);

  // H != 0: the volume term contributes n H times the lumped mass.
  const double H = 0.7;
  const std::vector<double> g = asmb.gradient(zero, H);
  const auto& mass = asmb.lumped_volume_mass();
  for (int i = 0; i < m.vertex_count(); ++i)
    CHECK(g[i] == doctest::Approx(2 * H * mass[i]).epsilon(1e-13));
}

TEST_CASE("hessian matches finite differences of the gradient") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.7, 2));
  const EnergyAssembler asmb(m, 2);
  ScalarField v = random_field(m, 3);
  const Eigen::SparseMatrix<double> Hm = asmb.hessian(v);
  const double step = 1e-6;
  double worst = 0;
  for (int i = 0; i < m.vertex_count(); ++i) {
    ScalarField vp = v, vm = v;
    vp[i] += step;
    vm[i] -= step;
    const auto gp = asmb.gradient(vp, 0.0);
    const auto gm = asmb.gradient(vm, 0.0);
    for (int j = 0; j < m.vertex_count(); ++j) {
      const double fd = (gp[j] - gm[j]) / (2 * step);
      worst = std::max(worst, std::abs(Hm.coeff(j, i) - fd));
    }
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("hessian is positive semidefinite and independent of H") {
  // Dense eigensolve oracle on a ~60-vertex mesh.
  const SphericalMesh m = build_mesh(DomainSpec::geodesic_ball(Vec3(0, 0, 1), 0.5, 2));
  CHECK(m.vertex_count() >= 50);
  const EnergyAssembler asmb(m, 2);
  for (unsigned seed : {1u, 2u, 3u}) {
    const ScalarField v = random_field(m, seed, 0.8);
    const Eigen::MatrixXd dense = Eigen::MatrixXd(asmb.hessian(v));
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
  // The volume term is linear, so the Hessian carries no H at all; compare
  // with an assembler-level recomputation through the energy definition.
  const ScalarField v = random_field(m, 9);
  const Eigen::SparseMatrix<double> h = asmb.hessian(v);
  const EnergyBreakdown lo = asmb.energy(v, -0.9);
  const EnergyBreakdown hi = asmb.energy(v, 0.9);
  CHECK(lo.area == hi.area);  // H only enters through total
  CHECK((Eigen::MatrixXd(h) - Eigen::MatrixXd(asmb.hessian(v))).norm() == 0.0);
}

TEST_CASE("numeric convexity of the energy") {
  const SphericalMesh m = build_mesh(DomainSpec::cap(0.5, 3));
  const EnergyAssembler asmb(m, 2);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 25; ++trial) {
    const ScalarField a = random_field(m, 100 + trial);
    const ScalarField b = random_field(m, 200 + trial);
    const double t = U(rng);
    ScalarField mix(m.vertex_count(), 0.0);
    for (int i = 0; i < m.vertex_count(); ++i) mix[i] = t * a[i] + (1 - t) * b[i];
    const double H = -0.5 + U(rng);
    CHECK(asmb.energy_total(mix, H) <=
          t * asmb.energy_total(a, H) + (1 - t) * asmb.energy_total(b, H) + 1e-12);
  }
}

TEST_CASE("boundary penalty") {
  const double eps = 0.5;
  const SphericalMesh m = build_mesh(DomainSpec::cap(eps, 5));
  const EnergyAssembler asmb(m, 2);
  ScalarField phi(m.vertex_count(), 0.0);
  for (int b : m.boundary_vertices()) phi[b] = 0.3;

  CHECK(asmb.boundary_penalty(phi, phi) == 0.0);

  // v = phi + 1: the penalty integrates y^{-2} over the boundary circle of
  // length 2 pi sqrt(1 - eps^2).
  ScalarField v = phi;
  for (auto& x : v.values) x += 1.0;
  const double expected = 2 * kPi * std::sqrt(1 - eps * eps) / (eps * eps);
  CHECK(asmb.boundary_penalty(v, phi) == doctest::Approx(expected).epsilon(0.01));

  // |.| symmetry: penalty(v) = penalty(2 phi - v).
  ScalarField w(m.vertex_count(), 0.0);
  for (int i = 0; i < m.vertex_count(); ++i) w[i] = 2 * phi[i] - v[i];
  CHECK(asmb.boundary_penalty(w, phi) ==
        doctest::Approx(asmb.boundary_penalty(v, phi)).epsilon(1e-14));
}

TEST_CASE("energy record format") {
  EnergyBreakdown e;
  e.area = 1.5;
  e.volume = -0.25;
  e.penalty = 0.0;
  e.total = 1.5 + 2 * 0.5 * (-0.25);
  e.n = 2;
  e.H = 0.5;
  const std::string rec = e.to_record();
  CHECK(rec.find("area=1.5\n") != std::string::npos);
  CHECK(rec.find("volume=-0.25\n") != std::string::npos);
  CHECK(rec.find("n=2\n") != std::string::npos);
}

TEST_CASE("discrete energy of the exact profile approaches the 1-D value") {
  // The rotationally symmetric oracle integrates the closed form to ~1e-10;
  // the triangulated energy must approach it at roughly second order.
  const double H = 0.5;
  const ExactEquidistantSolution sol(H, 0.0);
  AxisymProblem p;
  p.n = 2;
  p.H = H;
  p.theta_max = std::acos(0.4);
  const EnergyBreakdown ref = energy_1d(
      p, [&](double th) { return sol.profile(std::cos(th)); },
      [&](double th) { return sol.profile_dy(std::cos(th)) * -std::sin(th); });

  double prev = 0;
  for (int level : {3, 4, 5}) {
    const SphericalMesh m = build_mesh(DomainSpec::cap(0.4, level));
    const ScalarField v = exact_solution_eval(sol, m);
    const EnergyBreakdown e = assemble_energy(m, v, 2, H);
    const double err = std::abs(e.total - ref.total);
    if (level > 3) CHECK(prev / err > 2.0);
    prev = err;
  }
  CHECK(prev <= 1e-3 * std::abs(ref.total));
}
