#pragma once

#include <Eigen/Sparse>

#include "core/fields.hpp"
#include "core/geometry.hpp"
#include "core/sphere_mesh.hpp"

namespace hypcmc {

// ---------------------------------------------------------------------------
// Discrete energy
//   I(v) = A(v) + n H V(v) [+ boundary penalty]
//   A(v) = integral of sqrt(1 + |grad v|^2) y^{-n},
//   V(v) = integral of v y^{-(n+1)}.
// Piecewise-linear v; one quadrature point per triangle (weights evaluated at
// the normalized centroid, measure = spherical excess). The weight exponent n
// is a free integer >= 2; meshes themselves are 2-dimensional.
// ---------------------------------------------------------------------------

struct EnergyBreakdown {
  double area = 0.0;
  double volume = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  int n = 2;
  double H = 0.0;

  std::string to_record() const;  // flat structured text, one key=value per line
};

class EnergyAssembler {
 public:
  EnergyAssembler(const SphericalMesh& mesh, int n);

  const SphericalMesh& mesh() const { return *mesh_; }
  int n() const { return n_; }

  EnergyBreakdown energy(const ScalarField& v, double H) const;
  double energy_total(const ScalarField& v, double H) const;

  /// Exact gradient of the discrete energy with respect to vertex values.
  std::vector<double> gradient(const ScalarField& v, double H) const;

  /// Exact Hessian; symmetric positive semidefinite, independent of H.
  Eigen::SparseMatrix<double> hessian(const ScalarField& v) const;

  /// Trapezoidal boundary integral of |v - phi| y^{-n} over boundary edges.
  double boundary_penalty(const ScalarField& v, const ScalarField& phi) const;

  /// Lumped |v - phi| weights per boundary vertex (zero on interior).
  const std::vector<double>& penalty_weights() const { return penalty_w_; }

  /// Discrete lower bound for the area term: integral of y^{-n}.
  double area_lower_bound() const { return area_lb_; }

  /// Discrete k = integral of y^{-(n+1)} (the volume weight of v = 1).
  double volume_weight() const { return k_; }

  /// Lumped y^{-(n+1)} mass per vertex.
  const std::vector<double>& lumped_volume_mass() const { return vmass_; }

 private:
  const SphericalMesh* mesh_;
  int n_;
  std::vector<double> wA_;     // per triangle: area * y^{-n}
  std::vector<double> wV_;     // per triangle: area * y^{-(n+1)}
  std::vector<double> vmass_;  // per vertex lumped y^{-(n+1)} mass
  std::vector<double> penalty_w_;
  double area_lb_ = 0.0;
  double k_ = 0.0;
};

// Spec-level convenience wrappers.
EnergyBreakdown assemble_energy(const SphericalMesh& mesh, const ScalarField& v, int n,
                                double H);
std::vector<double> assemble_gradient(const SphericalMesh& mesh, const ScalarField& v,
                                      int n, double H);
Eigen::SparseMatrix<double> assemble_hessian(const SphericalMesh& mesh,
                                             const ScalarField& v, int n);
double boundary_penalty(const SphericalMesh& mesh, const ScalarField& v,
                        const ScalarField& phi, int n);

}  // namespace hypcmc
