#pragma once

#include <functional>
#include <vector>

#include "core/energy.hpp"

namespace hypcmc {

// ---------------------------------------------------------------------------
// Independent 1-D reference for rotationally symmetric cap problems, valid
// for any weight exponent n >= 2. In colatitude theta (y = cos theta) the
// divergence-form equation reduces to the flux form
//   (s(theta) v' / W)' = n H sin^{n-1} cos^{-(n+1)},
//   s(theta) = sin^{n-1} theta cos^{-n} theta,  W = sqrt(1 + v'^2),
// with the pole regularity condition v'(0) = 0 and v(theta_max) prescribed.
// ---------------------------------------------------------------------------

struct AxisymProblem {
  int n = 2;
  double H = 0.0;
  double theta_max = 1.0;  // cap boundary colatitude; cos(theta_max) = eps
  double boundary_value = 0.0;
  int grid_points = 2048;

  void validate() const;
};

struct AxisymProfile {
  std::vector<double> theta;
  std::vector<double> v;
  std::vector<double> dv;  // nodal derivative estimates

  double value_at(double th) const;  // cubic Hermite interpolation
  double deriv_at(double th) const;
  std::string csv_string() const;  // columns theta,v,dv
};

/// Finite-volume collocation with Newton iteration; the nonlinear residual
/// on the grid is driven below 1e-10 in max norm (flux balance per cell).
/// Throws on Newton divergence.
AxisymProfile solve_axisym(const AxisymProblem& p);

/// Midpoint fluxes s v'/W of a profile; constant (= 0) when H = 0.
std::vector<double> axisym_fluxes(const AxisymProblem& p, const AxisymProfile& prof);

/// Adaptive-quadrature energy of an analytic profile (v, v') to relative
/// accuracy ~1e-10.
EnergyBreakdown energy_1d(const AxisymProblem& p, const std::function<double(double)>& v,
                          const std::function<double(double)>& dv);

/// Energy of a solved profile via its Hermite interpolant.
EnergyBreakdown energy_1d(const AxisymProblem& p, const AxisymProfile& prof);

/// Unit (n-1)-sphere measure (2 pi for n = 2).
double sphere_measure(int n);

/// Adaptive Simpson quadrature (shared with tests).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol);

}  // namespace hypcmc
