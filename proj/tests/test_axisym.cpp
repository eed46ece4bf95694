#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "core/axisym.hpp"
#include "core/geometry.hpp"

using namespace hypcmc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("problem validation") {
  AxisymProblem p;
  p.H = 1.2;
  CHECK_THROWS_AS(p.validate(), Error);
  p.H = 0.0;
  p.theta_max = 2.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.theta_max = 1.0;
  p.grid_points = 10;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("H = 0 gives the constant profile and a vanishing flux integral") {
  AxisymProblem p;
  p.n = 2;
  p.H = 0.0;
  p.theta_max = 1.1;
  p.boundary_value = 0.37;
  p.grid_points = 512;
  const AxisymProfile prof = solve_axisym(p);
  for (double v : prof.v) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
  // First integral of the flux form: s v'/W constant (== 0 by regularity).
  for (double f : axisym_fluxes(p, prof)) CHECK(std::abs(f) <= 1e-10);
}

TEST_CASE("closed-form recovery at 1e-8, n = 2") {
  const double H = 0.5;
  const ExactEquidistantSolution sol(H, 0.0);
  AxisymProblem p;
  p.n = 2;
  p.H = H;
  p.theta_max = std::acos(0.3);
  p.boundary_value = sol.profile(0.3);
  p.grid_points = 32768;
  const AxisymProfile prof = solve_axisym(p);
  double worst = 0;
  for (size_t i = 0; i < prof.theta.size(); ++i)
    worst = std::max(worst,
                     std::abs(prof.v[i] - sol.profile(std::cos(prof.theta[i]))));
  CHECK(worst <= 1e-8);
}

TEST_CASE("the closed form solves the reduced equation for every n") {
  const double H = 0.3;
  const ExactEquidistantSolution sol(H, 0.0);
  AxisymProblem p;
  p.n = 4;
  p.H = H;
  p.theta_max = 1.1;
  p.boundary_value = sol.profile(std::cos(1.1));
  p.grid_points = 32768;
  const AxisymProfile prof = solve_axisym(p);
  double worst = 0;
  for (size_t i = 0; i < prof.theta.size(); ++i)
    worst = std::max(worst,
                     std::abs(prof.v[i] - sol.profile(std::cos(prof.theta[i]))));
  CHECK(worst <= 1e-8);
}

TEST_CASE("grid self-convergence at order >= 2") {
  AxisymProblem p;
  p.n = 2;
  p.H = 0.45;
  p.theta_max = 1.2;
  p.boundary_value = 0.3;  // no closed form for this data

  auto solve_at = [&](int N) {
    AxisymProblem q = p;
    q.grid_points = N;
    return solve_axisym(q);
  };
  const AxisymProfile fine = solve_at(4096);
  double errs[2];
  int k = 0;
  for (int N : {256, 512}) {
    const AxisymProfile prof = solve_at(N);
    double e = 0;
    const int stride = 4096 / N;
    for (int i = 0; i <= N; ++i)
      e = std::max(e, std::abs(prof.v[i] - fine.v[i * stride]));
    errs[k++] = e;
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order >= 2.0);
}

TEST_CASE("energy quadrature reproduces analytic antiderivatives") {
  AxisymProblem p;
  p.n = 2;
  p.H = 0.0;
  const double eps = 0.45;
  p.theta_max = std::acos(eps);

  // v = 0: area integral is 2 pi (1/eps - 1), volume vanishes.
  const EnergyBreakdown e0 = energy_1d(
      p, [](double) { return 0.0; }, [](double) { return 0.0; });
  CHECK(e0.area == doctest::Approx(2 * kPi * (1 / eps - 1)).epsilon(1e-10));
  CHECK(std::abs(e0.volume) <= 1e-12);

  // v = c: volume integral is c pi (1/eps^2 - 1).
  const double c = -0.8;
  const EnergyBreakdown ec = energy_1d(
      p, [c](double) { return c; }, [](double) { return 0.0; });
  CHECK(ec.volume == doctest::Approx(c * kPi * (1 / (eps * eps) - 1)).epsilon(1e-10));
}

TEST_CASE("energy of a solved profile via its interpolant") {
  const double H = 0.5;
  const ExactEquidistantSolution sol(H, 0.0);
  AxisymProblem p;
  p.n = 2;
  p.H = H;
  p.theta_max = 1.0;
  p.boundary_value = sol.profile(std::cos(1.0));
  p.grid_points = 4096;
  const AxisymProfile prof = solve_axisym(p);
  const EnergyBreakdown from_profile = energy_1d(p, prof);
  const EnergyBreakdown analytic = energy_1d(
      p, [&](double th) { return sol.profile(std::cos(th)); },
      [&](double th) { return sol.profile_dy(std::cos(th)) * -std::sin(th); });
  CHECK(from_profile.total == doctest::Approx(analytic.total).epsilon(1e-7));
}

TEST_CASE("profile CSV export") {
  AxisymProblem p;
  p.grid_points = 64;
  const AxisymProfile prof = solve_axisym(p);
  const std::string csv = prof.csv_string();
  CHECK(csv.rfind("theta,v,dv\n", 0) == 0);
}
