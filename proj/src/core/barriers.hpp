#pragma once

#include "core/fields.hpp"
#include "core/geometry.hpp"
#include "core/sphere_mesh.hpp"

namespace hypcmc {

// ---------------------------------------------------------------------------
// Explicit sub/supersolutions and boundary barriers for the Dirichlet problem
// of the weighted area-plus-volume energy, plus the solvability diagnostics
// on the radial cone over the domain boundary.
// ---------------------------------------------------------------------------

/// Global exact sub/supersolution pair (equidistant-sphere family) bounding
/// every solution whose boundary data is bounded by M in absolute value.
/// Returns (lower, upper). Both fields are exact constant-mean-curvature
/// profiles; lower <= -M and upper >= M hold on the mesh (with equality
/// possible only at the pole y = 1).
std::pair<ScalarField, ScalarField> global_barriers(double H, double M_bound,
                                                    const SphericalMesh& mesh);

struct ConeCurvatureReport {
  std::vector<int> vertex_ids;       // boundary vertices, loop order
  std::vector<double> h;             // hyperbolic mean curvature of the cone
  std::vector<double> boundary_H;    // discrete geodesic curvature of the loop
  std::vector<double> e_dot_N;       // vertical component of the inward normal
  double margin = 0.0;               // min h - |H|

  std::string csv_string() const;  // columns vertex_id,h,margin
};

/// Hyperbolic mean curvature h = y (n-1)/n * H_boundary + e.N of the radial
/// cone over the domain boundary, restricted to the boundary (n = 2).
/// H_boundary is estimated from turning angles of the boundary loop; N is the
/// inward unit normal. Throws on loops with fewer than 3 vertices.
ConeCurvatureReport cone_mean_curvature(const SphericalMesh& mesh, double H);

/// Sharpened per-vertex solvability test
///   H_boundary > -(n/2) (-|H| + sqrt(H^2 + 4 y^2 / (n (n-1)))).
struct SharpenedCondition {
  std::vector<int> vertex_ids;
  std::vector<double> threshold;
  std::vector<char> satisfied;
};
SharpenedCondition sharpened_condition(const SphericalMesh& mesh, double H);

// Log-profile psi(t) = log(1 + beta t) / K with beta = K^2 exp(M K) and
// delta = K^{-2}; psi(0) = 0, psi is increasing and concave, and
// psi(delta) = log(1 + exp(M K)) / K >= M. Evaluation is done in log space
// so that large M K never overflows.
struct BarrierProfile {
  double K = 16.0;
  double M = 0.0;

  double delta() const { return 1.0 / (K * K); }
  double log_beta() const { return 2.0 * std::log(K) + M * K; }
  double psi(double t) const;
  double psi_prime(double t) const;
  double psi_second(double t) const;  // = -K psi'^2
  double psi_at_delta() const;
};

struct BarrierPair {
  ScalarField upper;  // phi + psi(d) on {d < delta}, sup_bnd(phi) + psi(delta) beyond
  ScalarField lower;
  ScalarField distance;  // boundary distance used for the construction
  ScalarField phi;       // ambient data the barriers attach to
  double K = 0.0;
  double beta = 0.0;   // K^2 exp(M K); +inf when it overflows (kept for report)
  double delta = 0.0;  // K^{-2}
  double M = 0.0;      // 2 sup |phi|
  bool accepted = false;
  double upper_residual = 0.0;  // max of the operator on the upper barrier
  double lower_residual = 0.0;  // min of the operator on the lower barrier
};

/// Builds the boundary barrier pair for ambient data phi (a field on the
/// whole mesh whose boundary trace is the Dirichlet data). The constant K is
/// doubled from 16 until both barrier inequalities verify at sample points
/// inside {d < delta}, capped at 2^20 (accepted=false past the cap, never
/// silently). Requires the cone solvability margin >= margin_required > 0.
BarrierPair boundary_barriers(const SphericalMesh& mesh, const ScalarField& phi,
                              double H, double margin_required = 0.05);

/// Max of the nondivergence operator residual (1/W) a^{ij} v_ij -
/// (n/y) e.grad(v)/W - n H / y over interior vertices with boundary distance
/// below `region`, using local quadratic fits of the field. Negative values
/// certify a supersolution there; returns -inf when no vertex qualifies.
double verify_supersolution(const SphericalMesh& mesh, const ScalarField& field,
                            double H, double region);

/// Same quantity evaluated on the composite barrier field at sample points a
/// fraction of delta away from the boundary along inward normals: the smooth
/// ingredients (distance field, phi) are fitted quadratically while psi is
/// differentiated exactly, so the inequality is tested inside {d < delta}
/// where the construction lives. Returns the max over samples for the upper
/// barrier and the min for the lower one.
double barrier_operator_extremum(const SphericalMesh& mesh, const BarrierPair& pair,
                                 bool upper, double H);

/// Decision threshold for the verifiers: 1e-3 times a discretization scale
/// (n/y at the worst sample, times the local mesh width relative to 1e-2).
double verifier_tolerance(const SphericalMesh& mesh, int n);

}  // namespace hypcmc
