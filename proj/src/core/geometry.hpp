#pragma once

#include <Eigen/Dense>

#include "core/fields.hpp"
#include "core/sphere_mesh.hpp"

namespace hypcmc {

// ---------------------------------------------------------------------------
// Geometry kernel for radial graphs X = e^{v(z)} z in the half-space model of
// hyperbolic space. The metric is ds^2 = x_3^{-2} ds_E^2; a surface has
// hyperbolic principal curvatures kappa = u * kappa_E + nu_vertical where
// u = X.e is the height and nu the Euclidean outward unit normal.
// ---------------------------------------------------------------------------

struct MeanCurvature {
  double H = 0.0;
  explicit MeanCurvature(double h) : H(h) {
    if (!(std::abs(h) < 1.0))
      throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");
  }
};

// Equidistant-sphere solutions v(z) = c + log(sqrt(H^2 y^2 + (1-H^2)) - H y),
// the radial-graph representations of Euclidean spheres of radius e^c
// centered at (0, 0, -H e^c). They have constant hyperbolic mean curvature H
// with respect to the outward normal.
struct ExactEquidistantSolution {
  double H = 0.0;
  double c = 0.0;

  ExactEquidistantSolution(double H_, double c_) : H(H_), c(c_) {
    if (!(std::abs(H) < 1.0))
      throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");
  }

  // Radial profile and its y-derivatives; Q(y) = sqrt(H^2 y^2 + 1 - H^2).
  double Q(double y) const { return std::sqrt(H * H * y * y + 1.0 - H * H); }
  double profile(double y) const { return c + std::log(Q(y) - H * y); }
  double profile_dy(double y) const { return -H / Q(y); }
  // Slope sqrt(1 + |grad v|^2) of the graph at height y.
  double W(double y) const { return 1.0 / Q(y); }
  // Vertical component of the Euclidean outward normal at height y.
  double nu_vertical(double y) const { return Q(y) * y + H * (1.0 - y * y); }

  double operator()(const Vec3& z) const { return profile(z.z()); }
};

ScalarField exact_solution_eval(const ExactEquidistantSolution& sol,
                                const SphericalMesh& mesh);

/// Hyperbolic curvature from Euclidean curvature: u*kappa_e + nu_vertical.
/// Requires u > 0 (point in the open upper half-space).
double curvature_convert(double u, double kappa_e, double nu_vertical);

// Per-vertex recovered tangential gradient of a piecewise-linear field:
// spherical-area weighted average of flat triangle gradients, projected to
// the tangent plane of the sphere at each vertex.
std::vector<Vec3> vertex_gradients(const SphericalMesh& mesh, const ScalarField& v);

/// Euclidean outward unit normals nu = (z - grad v) / W of the radial graph;
/// unit by construction since grad v is tangential.
std::vector<Vec3> outward_normal(const SphericalMesh& mesh, const ScalarField& v);

/// Slope field W = sqrt(1 + |grad v|^2) from the recovered gradient.
ScalarField slope_field(const SphericalMesh& mesh, const ScalarField& v);

/// Per-vertex estimate of the hyperbolic mean curvature of X = e^v z:
/// cotangent mean-curvature normal of the embedded triangulation gives the
/// Euclidean mean curvature (H_E = -1/R on a radius-R sphere with outward
/// normal), converted via H = u H_E + nu_vertical. Boundary vertices carry
/// one-sided estimates and are excluded from convergence claims.
ScalarField hyperbolic_mean_curvature(const SphericalMesh& mesh, const ScalarField& v);

// Local quadratic fit of a field at a vertex in geodesic normal coordinates:
// f(xi) ~ f0 + g.xi + xi^T Hf xi / 2 fitted over the 1-ring (extended to the
// 2-ring when fewer than 5 neighbors are available). Throws when fewer than
// 5 fit points exist.
struct QuadraticFit {
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
  Vec3 t1, t2;  // tangent basis the coordinates refer to
};
QuadraticFit fit_quadratic(const SphericalMesh& mesh, const std::vector<double>& values,
                           int vertex);

/// Nondivergence-form operator residual at a vertex from a quadratic fit:
///   (1/W) a^{ij} v_ij - (n/y) e.grad(v)/W - n H / y,
/// with a^{ij} = sigma^{ij} - v^i v^j / W^2. Negative at supersolutions,
/// positive at subsolutions, zero at solutions.
double operator_residual_at(const SphericalMesh& mesh, const std::vector<double>& values,
                            int vertex, int n, double H);

}  // namespace hypcmc
