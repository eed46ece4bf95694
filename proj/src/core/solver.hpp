#pragma once

#include <functional>
#include <optional>

#include "core/barriers.hpp"
#include "core/energy.hpp"

namespace hypcmc {

// ---------------------------------------------------------------------------
// Dirichlet solver for the discrete energy: damped Newton on the convex
// functional, conjugate-gradient linear solves with diagonal preconditioning.
// Meshes are 2-dimensional, so the weight exponent is n = 2 throughout.
// ---------------------------------------------------------------------------

struct SolveOptions {
  double grad_tol = 1e-10;      // max-norm of the reduced gradient
  int max_newton = 60;
  double ls_backtrack = 0.5;    // backtracking factor
  double ls_sufficient = 1e-4;  // Armijo sufficient-decrease constant
  double cg_rel_tol = 1e-12;
  int cg_max_iter_per_vertex = 10;
  enum class Mode { StrongDirichlet, Penalty };
  Mode mode = Mode::StrongDirichlet;
  double huber_eps = 1e-6;  // penalty-mode smoothing width of |v - phi|

  void validate() const;
};

struct SolveReport {
  ScalarField v;
  int iterations = 0;
  double final_grad_norm = 0.0;
  EnergyBreakdown energy;
  double residual_divform = 0.0;
  bool sandwich_ok = false;  // within the global exact barrier pair
  std::vector<double> energy_history;  // strictly decreasing along the iteration

  std::string to_record() const;
};

/// Minimizes the discrete energy over interior vertex values with boundary
/// values fixed to phi (strong mode), or over all values with the smoothed
/// boundary penalty added (penalty mode). phi is a full-mesh field; only its
/// boundary entries act as data. The initial guess (unless supplied) is the
/// weighted-harmonic extension of phi clamped between the global barriers.
/// Throws on Newton non-convergence.
SolveReport solve_dirichlet(const SphericalMesh& mesh, const ScalarField& phi, double H,
                            const SolveOptions& opts = {},
                            const ScalarField* initial_guess = nullptr);

/// Max-norm of the energy gradient over interior hat functions, normalized by
/// the lumped y^{-(n+1)} mass. Equals n|H| for v = 0, and tends to zero with
/// mesh refinement on interpolated exact solutions.
double residual_divergence_form(const SphericalMesh& mesh, const ScalarField& v,
                                double H);

struct ComparisonResult {
  bool ordered = false;
  double max_violation = 0.0;  // max of v2 - v1
  ScalarField v1, v2;
};

/// Solves with data phi1 >= phi2 (checked) and verifies v1 >= v2 - 1e-8.
ComparisonResult comparison_test(const SphericalMesh& mesh, const ScalarField& phi1,
                                 const ScalarField& phi2, double H,
                                 const SolveOptions& opts = {});

/// Energy of the solve is compared with 20 random boundary-vanishing bumps
/// of the solution; true when no perturbation beats it by more than 1e-10.
bool minimizer_consistency(const SphericalMesh& mesh, const ScalarField& phi, double H,
                           const SolveOptions& opts = {}, unsigned seed = 0);

struct AsymptoticResult {
  std::vector<double> eps;
  std::vector<SphericalMesh> meshes;
  std::vector<ScalarField> solutions;
  // Sup-difference of consecutive solutions over the shared vertices of the
  // compact {y >= eps.front()}.
  std::vector<double> sup_diff;

  std::string table_csv() const;  // columns eps,n_vertices,sup_diff_prev
};

/// Cap exhaustion toward the asymptotic boundary: for each eps in the
/// strictly decreasing schedule, solves on the cap {y > eps} with boundary
/// data equal to the meridian-constant extension of the equator data clamped
/// between the exact sub/supersolutions that meet its extremes at y = 0.
AsymptoticResult solve_asymptotic(const std::function<double(double)>& equator_data,
                                  double H, const std::vector<double>& schedule,
                                  int level, const SolveOptions& opts = {});

/// Slope W(P) = sqrt(1 + |grad v|^2) at vertex P; errors when the geodesic
/// ball B_rho(P) is not contained in the mesh interior.
std::pair<double, double> gradient_bound_monitor(const SphericalMesh& mesh,
                                                 const ScalarField& v, int P,
                                                 double rho);

}  // namespace hypcmc
