#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hypcmc {

void export_field_csv(const SphericalMesh& mesh, const ScalarField& f,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  out << field_csv_string(mesh, f);
}

std::string field_csv_string(const SphericalMesh& mesh, const ScalarField& f) {
  f.check_on(mesh);
  std::ostringstream os;
  os << "vertex_id,x,y,z,value\n";
  char buf[160];
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", i,
                  mesh.vertices[i].x(), mesh.vertices[i].y(), mesh.vertices[i].z(),
                  f[i]);
    os << buf;
  }
  return os.str();
}

ScalarField exact_solution_eval(const ExactEquidistantSolution& sol,
                                const SphericalMesh& mesh) {
  ScalarField f(mesh.vertex_count(), 0.0, "log_height");
  for (int i = 0; i < mesh.vertex_count(); ++i) f[i] = sol.profile(mesh.y(i));
  return f;
}

double curvature_convert(double u, double kappa_e, double nu_vertical) {
  if (!(u > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "height u must be positive in the half-space model");
  return u * kappa_e + nu_vertical;
}

std::vector<Vec3> vertex_gradients(const SphericalMesh& mesh, const ScalarField& v) {
  v.check_on(mesh);
  std::vector<Vec3> g(mesh.vertex_count(), Vec3::Zero());
  std::vector<double> wsum(mesh.vertex_count(), 0.0);
  for (int ti = 0; ti < mesh.triangle_count(); ++ti) {
    const auto& t = mesh.triangles[ti];
    Vec3 gt = Vec3::Zero();
    for (int k = 0; k < 3; ++k) gt += v[t[k]] * mesh.tri_grad[ti][k];
    for (int k = 0; k < 3; ++k) {
      g[t[k]] += mesh.tri_area[ti] * gt;
      wsum[t[k]] += mesh.tri_area[ti];
    }
  }
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    g[i] /= wsum[i];
    g[i] -= g[i].dot(mesh.vertices[i]) * mesh.vertices[i];  // tangential part
  }
  return g;
}

std::vector<Vec3> outward_normal(const SphericalMesh& mesh, const ScalarField& v) {
  const auto g = vertex_gradients(mesh, v);
  std::vector<Vec3> nu(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const double W = std::sqrt(1.0 + g[i].squaredNorm());
    nu[i] = (mesh.vertices[i] - g[i]) / W;
  }
  return nu;
}

ScalarField slope_field(const SphericalMesh& mesh, const ScalarField& v) {
  const auto g = vertex_gradients(mesh, v);
  ScalarField W(mesh.vertex_count(), 1.0, "slope");
  for (int i = 0; i < mesh.vertex_count(); ++i)
    W[i] = std::sqrt(1.0 + g[i].squaredNorm());
  return W;
}

ScalarField hyperbolic_mean_curvature(const SphericalMesh& mesh, const ScalarField& v) {
  v.check_on(mesh);
  const int nv = mesh.vertex_count();

  std::vector<Vec3> X(nv);
  for (int i = 0; i < nv; ++i) X[i] = std::exp(v[i]) * mesh.vertices[i];

  // Cotangent mean-curvature normal on the embedded triangulation. The
  // vertex normalization uses the signed circumcentric dual area, for which
  // the estimate is exact (to rounding) whenever the embedded mesh is
  // inscribed in a sphere; the barycentric area is a fallback where slivers
  // make the signed dual collapse.
  std::vector<Vec3> lap(nv, Vec3::Zero());
  std::vector<double> area_circ(nv, 0.0), area_bar(nv, 0.0);
  for (const auto& t : mesh.triangles) {
    const Vec3& a = X[t[0]];
    const Vec3& b = X[t[1]];
    const Vec3& c = X[t[2]];
    const double A2 = (b - a).cross(c - a).norm();  // twice the flat area
    if (A2 < 2e-14)
      throw Error(ErrorCode::DomainViolation, "degenerate embedded triangle");
    double cot[3];
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = X[t[k]];
      const Vec3& q = X[t[(k + 1) % 3]];
      const Vec3& r = X[t[(k + 2) % 3]];
      cot[k] = (q - p).dot(r - p) / A2;  // angle at p, opposite edge (q,r)
      lap[t[(k + 1) % 3]] += cot[k] * (r - q);
      lap[t[(k + 2) % 3]] += cot[k] * (q - r);
    }
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = X[t[k]];
      const Vec3& q = X[t[(k + 1) % 3]];
      const Vec3& r = X[t[(k + 2) % 3]];
      area_circ[t[k]] += ((r - p).squaredNorm() * cot[(k + 1) % 3] +
                          (q - p).squaredNorm() * cot[(k + 2) % 3]) /
                         8.0;
      area_bar[t[k]] += A2 / 6.0;
    }
  }

  const auto nu = outward_normal(mesh, v);
  ScalarField H(nv, 0.0, "mean_curvature");
  for (int i = 0; i < nv; ++i) {
    const double area =
        (area_circ[i] > 0.1 * area_bar[i]) ? area_circ[i] : area_bar[i];
    const Vec3 mcn = lap[i] / (2.0 * area);  // = dim * H_E * nu
    const double H_E = 0.5 * mcn.dot(nu[i]);
    const double u = X[i].z();
    H[i] = curvature_convert(u, H_E, nu[i].z());
  }
  return H;
}

QuadraticFit fit_quadratic(const SphericalMesh& mesh, const std::vector<double>& values,
                           int vertex) {
  const Vec3& z0 = mesh.vertices[vertex];
  std::set<int> ring(mesh.vertex_neighbors[vertex].begin(),
                     mesh.vertex_neighbors[vertex].end());
  if (ring.size() < 5) {
    for (int nb : mesh.vertex_neighbors[vertex])
      for (int nb2 : mesh.vertex_neighbors[nb])
        if (nb2 != vertex) ring.insert(nb2);
  }
  if (ring.size() < 5)
    throw Error(ErrorCode::InvalidArgument, "too few neighbors for quadratic fit");

  QuadraticFit fit;
  tangent_basis(z0, fit.t1, fit.t2);

  // Normal coordinates via the logarithm map; covariant second derivatives at
  // the center equal coordinate second derivatives there.
  const int m = static_cast<int>(ring.size());
  Eigen::MatrixXd A(m, 5);
  Eigen::VectorXd rhs(m);
  int r = 0;
  for (int j : ring) {
    const Vec3& zj = mesh.vertices[j];
    const double ang = arc_length(z0, zj);
    Vec3 dir = zj - zj.dot(z0) * z0;
    const double dn = dir.norm();
    dir = dn > 1e-15 ? Vec3(dir / dn) : fit.t1;
    const double x1 = ang * dir.dot(fit.t1);
    const double x2 = ang * dir.dot(fit.t2);
    A(r, 0) = x1;
    A(r, 1) = x2;
    A(r, 2) = 0.5 * x1 * x1;
    A(r, 3) = x1 * x2;
    A(r, 4) = 0.5 * x2 * x2;
    rhs(r) = values[j] - values[vertex];
    ++r;
  }
  Eigen::Matrix<double, 5, 5> N = A.transpose() * A;
  Eigen::Matrix<double, 5, 1> b = A.transpose() * rhs;
  Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(N);
  if (!lu.isInvertible())
    throw Error(ErrorCode::InvalidArgument, "degenerate neighborhood for quadratic fit");
  Eigen::Matrix<double, 5, 1> cf = lu.solve(b);
  fit.grad << cf(0), cf(1);
  fit.hess << cf(2), cf(3), cf(3), cf(4);
  return fit;
}

double operator_residual_at(const SphericalMesh& mesh, const std::vector<double>& values,
                            int vertex, int n, double H) {
  const QuadraticFit fit = fit_quadratic(mesh, values, vertex);
  const Vec3& z0 = mesh.vertices[vertex];
  const double y = z0.z();
  const Eigen::Vector2d g = fit.grad;
  const double W2 = 1.0 + g.squaredNorm();
  const double W = std::sqrt(W2);
  Eigen::Matrix2d a = Eigen::Matrix2d::Identity() - (g * g.transpose()) / W2;
  const double principal = (a * fit.hess).trace() / W;
  const Vec3 e_tan = Vec3(0, 0, 1) - y * z0;
  const Eigen::Vector2d e2(e_tan.dot(fit.t1), e_tan.dot(fit.t2));
  return principal - (n / y) * e2.dot(g) / W - n * H / y;
}

}  // namespace hypcmc
