#include "core/energy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hypcmc {

std::string EnergyBreakdown::to_record() const {
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "area=%.17g\n", area);
  os << buf;
  std::snprintf(buf, sizeof(buf), "volume=%.17g\n", volume);
  os << buf;
  std::snprintf(buf, sizeof(buf), "penalty=%.17g\n", penalty);
  os << buf;
  std::snprintf(buf, sizeof(buf), "total=%.17g\n", total);
  os << buf;
  std::snprintf(buf, sizeof(buf), "n=%d\n", n);
  os << buf;
  std::snprintf(buf, sizeof(buf), "H=%.17g\n", H);
  os << buf;
  return os.str();
}

EnergyAssembler::EnergyAssembler(const SphericalMesh& mesh, int n)
    : mesh_(&mesh), n_(n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "weight exponent n must be >= 2");
  const int nt = mesh.triangle_count();
  wA_.resize(nt);
  wV_.resize(nt);
  vmass_.assign(mesh.vertex_count(), 0.0);
  for (int ti = 0; ti < nt; ++ti) {
    const double y = mesh.tri_y[ti];
    wA_[ti] = mesh.tri_area[ti] * std::pow(y, -n);
    wV_[ti] = mesh.tri_area[ti] * std::pow(y, -(n + 1));
    area_lb_ += wA_[ti];
    k_ += wV_[ti];
    for (int k = 0; k < 3; ++k) vmass_[mesh.triangles[ti][k]] += wV_[ti] / 3.0;
  }
  penalty_w_.assign(mesh.vertex_count(), 0.0);
  for (const auto& e : mesh.edges) {
    if (!e.boundary()) continue;
    penalty_w_[e.a] += 0.5 * e.arc * std::pow(mesh.y(e.a), -n);
    penalty_w_[e.b] += 0.5 * e.arc * std::pow(mesh.y(e.b), -n);
  }
}

EnergyBreakdown EnergyAssembler::energy(const ScalarField& v, double H) const {
  v.check_on(*mesh_);
  EnergyBreakdown out;
  out.n = n_;
  out.H = H;
  for (int ti = 0; ti < mesh_->triangle_count(); ++ti) {
    const auto& t = mesh_->triangles[ti];
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < 3; ++k) g += v[t[k]] * mesh_->tri_grad[ti][k];
    out.area += wA_[ti] * std::sqrt(1.0 + g.squaredNorm());
    out.volume += wV_[ti] * (v[t[0]] + v[t[1]] + v[t[2]]) / 3.0;
  }
  out.total = out.area + n_ * H * out.volume;
  return out;
}

double EnergyAssembler::energy_total(const ScalarField& v, double H) const {
  const EnergyBreakdown b = energy(v, H);
  return b.total;
}

std::vector<double> EnergyAssembler::gradient(const ScalarField& v, double H) const {
  v.check_on(*mesh_);
  std::vector<double> grad(mesh_->vertex_count(), 0.0);
  for (int ti = 0; ti < mesh_->triangle_count(); ++ti) {
    const auto& t = mesh_->triangles[ti];
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < 3; ++k) g += v[t[k]] * mesh_->tri_grad[ti][k];
    const double W = std::sqrt(1.0 + g.squaredNorm());
    for (int k = 0; k < 3; ++k) {
      grad[t[k]] += wA_[ti] * g.dot(mesh_->tri_grad[ti][k]) / W;
      grad[t[k]] += n_ * H * wV_[ti] / 3.0;
    }
  }
  return grad;
}

Eigen::SparseMatrix<double> EnergyAssembler::hessian(const ScalarField& v) const {
  v.check_on(*mesh_);
  const int nv = mesh_->vertex_count();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh_->triangle_count() * 9);
  for (int ti = 0; ti < mesh_->triangle_count(); ++ti) {
    const auto& t = mesh_->triangles[ti];
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < 3; ++k) g += v[t[k]] * mesh_->tri_grad[ti][k];
    const double W2 = 1.0 + g.squaredNorm();
    const double W = std::sqrt(W2);
    double s[3];
    for (int k = 0; k < 3; ++k) s[k] = g.dot(mesh_->tri_grad[ti][k]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double m_ab = mesh_->tri_grad[ti][a].dot(mesh_->tri_grad[ti][b]);
        const double h = wA_[ti] * (m_ab / W - s[a] * s[b] / (W2 * W));
        trip.emplace_back(t[a], t[b], h);
      }
    }
  }
  Eigen::SparseMatrix<double> Hm(nv, nv);
  Hm.setFromTriplets(trip.begin(), trip.end());
  return Hm;
}

double EnergyAssembler::boundary_penalty(const ScalarField& v,
                                         const ScalarField& phi) const {
  v.check_on(*mesh_);
  phi.check_on(*mesh_);
  double p = 0.0;
  for (int i : mesh_->boundary_vertices())
    p += penalty_w_[i] * std::abs(v[i] - phi[i]);
  return p;
}

EnergyBreakdown assemble_energy(const SphericalMesh& mesh, const ScalarField& v, int n,
                                double H) {
  if (!(std::abs(H) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");
  return EnergyAssembler(mesh, n).energy(v, H);
}

std::vector<double> assemble_gradient(const SphericalMesh& mesh, const ScalarField& v,
                                      int n, double H) {
  return EnergyAssembler(mesh, n).gradient(v, H);
}

Eigen::SparseMatrix<double> assemble_hessian(const SphericalMesh& mesh,
                                             const ScalarField& v, int n) {
  return EnergyAssembler(mesh, n).hessian(v);
}

double boundary_penalty(const SphericalMesh& mesh, const ScalarField& v,
                        const ScalarField& phi, int n) {
  return EnergyAssembler(mesh, n).boundary_penalty(v, phi);
}

}  // namespace hypcmc
