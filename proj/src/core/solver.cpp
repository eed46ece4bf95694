#include "core/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <sstream>

namespace hypcmc {

void SolveOptions::validate() const {
  if (!(grad_tol > 0) || !(cg_rel_tol > 0) || max_newton <= 0 ||
      !(ls_backtrack > 0 && ls_backtrack < 1) || !(ls_sufficient > 0) ||
      !(huber_eps > 0))
    throw Error(ErrorCode::InvalidArgument, "solve options out of range");
}

std::string SolveReport::to_record() const {
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "iterations=%d\n", iterations);
  os << buf;
  std::snprintf(buf, sizeof(buf), "final_grad_norm=%.17g\n", final_grad_norm);
  os << buf;
  std::snprintf(buf, sizeof(buf), "residual_divform=%.17g\n", residual_divform);
  os << buf;
  os << "sandwich_ok=" << (sandwich_ok ? 1 : 0) << "\n";
  os << energy.to_record();
  return os.str();
}

namespace {

constexpr int kWeightExp = 2;  // meshes are 2-dimensional

struct Dofs {
  std::vector<int> dof_of_vertex;  // -1 when the vertex value is fixed
  std::vector<int> vertex_of_dof;
};

Dofs make_dofs(const SphericalMesh& mesh, bool interior_only) {
  Dofs d;
  d.dof_of_vertex.assign(mesh.vertex_count(), -1);
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (interior_only && mesh.is_boundary(i)) continue;
    d.dof_of_vertex[i] = static_cast<int>(d.vertex_of_dof.size());
    d.vertex_of_dof.push_back(i);
  }
  return d;
}

Eigen::SparseMatrix<double> reduce_matrix(const Eigen::SparseMatrix<double>& A,
                                          const Dofs& dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      const int r = dofs.dof_of_vertex[it.row()];
      const int c = dofs.dof_of_vertex[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  Eigen::SparseMatrix<double> R(dofs.vertex_of_dof.size(), dofs.vertex_of_dof.size());
  R.setFromTriplets(trip.begin(), trip.end());
  return R;
}

Eigen::VectorXd cg_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                         const SolveOptions& opts) {
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(opts.cg_rel_tol);
  cg.setMaxIterations(static_cast<long>(opts.cg_max_iter_per_vertex) * A.rows());
  cg.compute(A);
  Eigen::VectorXd x = cg.solve(b);
  if (cg.info() != Eigen::Success && cg.error() > 1e-8)
    throw Error(ErrorCode::SolverFailure, "conjugate gradient did not converge");
  return x;
}

// Huber smoothing of |s| with width mu.
double huber(double s, double mu) {
  const double a = std::abs(s);
  return a <= mu ? s * s / (2 * mu) : a - mu / 2;
}
double huber_d(double s, double mu) {
  return std::abs(s) <= mu ? s / mu : (s > 0 ? 1.0 : -1.0);
}
double huber_dd(double s, double mu) { return std::abs(s) <= mu ? 1.0 / mu : 0.0; }

struct Objective {
  const SphericalMesh* mesh;
  const EnergyAssembler* assembler;
  const ScalarField* phi;
  double H;
  const SolveOptions* opts;
  bool penalty;

  double value(const ScalarField& v) const {
    double val = assembler->energy_total(v, H);
    if (penalty) {
      const auto& w = assembler->penalty_weights();
      for (int b : mesh->boundary_vertices())
        val += w[b] * huber(v[b] - (*phi)[b], opts->huber_eps);
    }
    return val;
  }

  std::vector<double> gradient(const ScalarField& v) const {
    std::vector<double> g = assembler->gradient(v, H);
    if (penalty) {
      const auto& w = assembler->penalty_weights();
      for (int b : mesh->boundary_vertices())
        g[b] += w[b] * huber_d(v[b] - (*phi)[b], opts->huber_eps);
    }
    return g;
  }

  Eigen::SparseMatrix<double> hessian(const ScalarField& v) const {
    Eigen::SparseMatrix<double> Hm = assembler->hessian(v);
    if (penalty) {
      const auto& w = assembler->penalty_weights();
      std::vector<Eigen::Triplet<double>> trip;
      for (int b : mesh->boundary_vertices())
        trip.emplace_back(b, b,
                          w[b] * huber_dd(v[b] - (*phi)[b], opts->huber_eps) + 1e-12);
      Eigen::SparseMatrix<double> D(Hm.rows(), Hm.cols());
      D.setFromTriplets(trip.begin(), trip.end());
      Hm += D;
    }
    return Hm;
  }
};

// Weighted-harmonic extension of the boundary data, clamped between the
// global exact barriers (the min/max truncation that keeps early iterates in
// the range where the y-weights behave).
ScalarField initial_guess_field(const SphericalMesh& mesh, const EnergyAssembler& asmb,
                                const ScalarField& phi, double H,
                                const SolveOptions& opts) {
  const auto& bnd = mesh.boundary_vertices();
  double lo = phi[bnd.front()], hi = lo;
  for (int b : bnd) {
    lo = std::min(lo, phi[b]);
    hi = std::max(hi, phi[b]);
  }
  ScalarField v0(mesh.vertex_count(), 0.0, "log_height");
  if (hi - lo < 1e-300) {
    for (auto& x : v0.values) x = hi;  // constant data extends exactly
    return v0;
  }
  for (int b : bnd) v0[b] = phi[b];
  const Eigen::SparseMatrix<double> K = asmb.hessian(ScalarField(mesh.vertex_count(), 0.0));
  const Dofs dofs = make_dofs(mesh, true);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int b : bnd) full[b] = phi[b];
  const Eigen::VectorXd r = K * full;
  Eigen::VectorXd rhs(dofs.vertex_of_dof.size());
  for (size_t k = 0; k < dofs.vertex_of_dof.size(); ++k)
    rhs[k] = -r[dofs.vertex_of_dof[k]];
  const Eigen::VectorXd x = cg_solve(reduce_matrix(K, dofs), rhs, opts);
  for (size_t k = 0; k < dofs.vertex_of_dof.size(); ++k)
    v0[dofs.vertex_of_dof[k]] = x[k];

  const double M = std::max(std::abs(lo), std::abs(hi));
  const auto [lower, upper] = global_barriers(H, M, mesh);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    v0[i] = std::clamp(v0[i], lower[i], upper[i]);
  for (int b : bnd) v0[b] = phi[b];
  return v0;
}

}  // namespace

SolveReport solve_dirichlet(const SphericalMesh& mesh, const ScalarField& phi, double H,
                            const SolveOptions& opts, const ScalarField* initial_guess) {
  opts.validate();
  phi.check_on(mesh);
  if (!(std::abs(H) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");
  if (mesh.boundary_vertices().empty())
    throw Error(ErrorCode::DomainViolation, "mesh has an empty boundary");

  const EnergyAssembler asmb(mesh, kWeightExp);
  const bool penalty = opts.mode == SolveOptions::Mode::Penalty;
  const Objective obj{&mesh, &asmb, &phi, H, &opts, penalty};
  const Dofs dofs = make_dofs(mesh, !penalty);
  const int ndof = static_cast<int>(dofs.vertex_of_dof.size());
  if (ndof == 0) throw Error(ErrorCode::DomainViolation, "mesh has no interior vertices");

  ScalarField v = initial_guess ? *initial_guess
                                : initial_guess_field(mesh, asmb, phi, H, opts);
  v.check_on(mesh);
  if (!penalty)
    for (int b : mesh.boundary_vertices()) v[b] = phi[b];

  SolveReport rep;
  rep.energy_history.push_back(obj.value(v));

  auto reduced_grad_norm = [&](const std::vector<double>& g) {
    double m = 0;
    for (int k = 0; k < ndof; ++k) m = std::max(m, std::abs(g[dofs.vertex_of_dof[k]]));
    return m;
  };

  bool converged = false;
  int it = 0;
  for (; it <= opts.max_newton; ++it) {
    const std::vector<double> g = obj.gradient(v);
    rep.final_grad_norm = reduced_grad_norm(g);
    if (rep.final_grad_norm <= opts.grad_tol) {
      converged = true;
      break;
    }
    if (it == opts.max_newton) break;

    const Eigen::SparseMatrix<double> Hm = reduce_matrix(obj.hessian(v), dofs);
    Eigen::VectorXd rhs(ndof);
    for (int k = 0; k < ndof; ++k) rhs[k] = -g[dofs.vertex_of_dof[k]];
    const Eigen::VectorXd delta = cg_solve(Hm, rhs, opts);

    double slope = 0;  // g . delta, negative for a descent direction
    for (int k = 0; k < ndof; ++k) slope += g[dofs.vertex_of_dof[k]] * delta[k];

    const double f0 = obj.value(v);
    double step = 1.0;
    ScalarField trial = v;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int k = 0; k < ndof; ++k)
        trial[dofs.vertex_of_dof[k]] = v[dofs.vertex_of_dof[k]] + step * delta[k];
      const double ft = obj.value(trial);
      if (ft <= f0 + opts.ls_sufficient * step * slope) {
        accepted = true;
        v = trial;
        rep.energy_history.push_back(ft);
        break;
      }
      step *= opts.ls_backtrack;
    }
    if (!accepted)
      throw Error(ErrorCode::SolverFailure, "line search failed to make progress");
  }
  if (!converged)
    throw Error(ErrorCode::SolverFailure,
                "Newton did not reach the gradient tolerance in " +
                    std::to_string(opts.max_newton) + " iterations");

  rep.iterations = it;
  rep.v = v;
  rep.v.role = "log_height";
  rep.energy = asmb.energy(v, H);
  if (penalty) rep.energy.penalty = asmb.boundary_penalty(v, phi);
  rep.energy.total = rep.energy.area + kWeightExp * H * rep.energy.volume +
                     rep.energy.penalty;
  rep.residual_divform = residual_divergence_form(mesh, v, H);

  double M = 0;
  for (int b : mesh.boundary_vertices()) M = std::max(M, std::abs(phi[b]));
  const auto [lower, upper] = global_barriers(H, M, mesh);
  rep.sandwich_ok = true;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (v[i] < lower[i] - 1e-6 || v[i] > upper[i] + 1e-6) rep.sandwich_ok = false;
  return rep;
}

double residual_divergence_form(const SphericalMesh& mesh, const ScalarField& v,
                                double H) {
  const EnergyAssembler asmb(mesh, kWeightExp);
  const std::vector<double> g = asmb.gradient(v, H);
  const auto& mass = asmb.lumped_volume_mass();
  double r = 0;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.is_boundary(i)) continue;
    r = std::max(r, std::abs(g[i]) / mass[i]);
  }
  return r;
}

ComparisonResult comparison_test(const SphericalMesh& mesh, const ScalarField& phi1,
                                 const ScalarField& phi2, double H,
                                 const SolveOptions& opts) {
  for (int b : mesh.boundary_vertices())
    if (phi1[b] < phi2[b])
      throw Error(ErrorCode::InvalidArgument,
                  "comparison requires phi1 >= phi2 on the boundary");
  ComparisonResult res;
  res.v1 = solve_dirichlet(mesh, phi1, H, opts).v;
  res.v2 = solve_dirichlet(mesh, phi2, H, opts).v;
  res.max_violation = 0;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    res.max_violation = std::max(res.max_violation, res.v2[i] - res.v1[i]);
  res.ordered = res.max_violation <= 1e-8;
  return res;
}

bool minimizer_consistency(const SphericalMesh& mesh, const ScalarField& phi, double H,
                           const SolveOptions& opts, unsigned seed) {
  const SolveReport rep = solve_dirichlet(mesh, phi, H, opts);
  const EnergyAssembler asmb(mesh, kWeightExp);
  const double base = asmb.energy_total(rep.v, H);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.5, 0.5);
  std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
  const double sigma = 2.0 * mesh.max_edge_arc();
  for (int trial = 0; trial < 20; ++trial) {
    const int c = pick(rng);
    const double a = amp(rng);
    ScalarField w = rep.v;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      if (mesh.is_boundary(i)) continue;
      const double r2 = (mesh.vertices[i] - mesh.vertices[c]).squaredNorm();
      w[i] += a * std::exp(-r2 / (2 * sigma * sigma));
    }
    if (asmb.energy_total(w, H) < base - 1e-10) return false;
  }
  return true;
}

std::string AsymptoticResult::table_csv() const {
  std::ostringstream os;
  os << "eps,n_vertices,sup_diff_prev\n";
  char buf[96];
  for (size_t i = 0; i < eps.size(); ++i) {
    if (i == 0)
      std::snprintf(buf, sizeof(buf), "%.17g,%d,\n", eps[i], meshes[i].vertex_count());
    else
      std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g\n", eps[i],
                    meshes[i].vertex_count(), sup_diff[i - 1]);
    os << buf;
  }
  return os.str();
}

namespace {
std::array<int64_t, 3> coord_key(const Vec3& p) {
  std::array<int64_t, 3> k;
  static_assert(sizeof(double) == sizeof(int64_t));
  double c[3] = {p.x(), p.y(), p.z()};
  std::memcpy(k.data(), c, sizeof(c));
  return k;
}
}  // namespace

AsymptoticResult solve_asymptotic(const std::function<double(double)>& equator_data,
                                  double H, const std::vector<double>& schedule,
                                  int level, const SolveOptions& opts) {
  if (schedule.empty())
    throw Error(ErrorCode::InvalidArgument, "empty cap schedule");
  for (size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] < schedule[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "cap schedule must be strictly decreasing");
  if (!(std::abs(H) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");

  // Extremes of the equator data, sampled densely.
  double glo = std::numeric_limits<double>::infinity(), ghi = -glo;
  for (int k = 0; k < 4096; ++k) {
    const double v = equator_data(2 * std::numbers::pi * k / 4096);
    glo = std::min(glo, v);
    ghi = std::max(ghi, v);
  }
  const ExactEquidistantSolution pin_lo(H, glo - ExactEquidistantSolution(H, 0).profile(0.0));
  const ExactEquidistantSolution pin_hi(H, ghi - ExactEquidistantSolution(H, 0).profile(0.0));

  AsymptoticResult out;
  for (double eps : schedule) {
    SphericalMesh mesh = build_mesh(DomainSpec::cap(eps, level));
    ScalarField phi(mesh.vertex_count(), 0.0);
    for (int b : mesh.boundary_vertices()) {
      const Vec3& z = mesh.vertices[b];
      const double raw = equator_data(std::atan2(z.y(), z.x()));
      phi[b] = std::clamp(raw, pin_lo.profile(z.z()), pin_hi.profile(z.z()));
    }
    SolveReport rep = solve_dirichlet(mesh, phi, H, opts);
    out.eps.push_back(eps);
    out.solutions.push_back(std::move(rep.v));
    out.meshes.push_back(std::move(mesh));
  }

  // Consecutive sup-differences over shared vertices of the first compact.
  const double y_min = schedule.front();
  for (size_t k = 0; k + 1 < out.meshes.size(); ++k) {
    std::map<std::array<int64_t, 3>, int> index;
    const SphericalMesh& a = out.meshes[k];
    for (int i = 0; i < a.vertex_count(); ++i)
      if (a.y(i) >= y_min - 1e-12) index[coord_key(a.vertices[i])] = i;
    const SphericalMesh& b = out.meshes[k + 1];
    double diff = 0;
    int matched = 0;
    for (int i = 0; i < b.vertex_count(); ++i) {
      auto it = index.find(coord_key(b.vertices[i]));
      if (it == index.end()) continue;
      diff = std::max(diff, std::abs(out.solutions[k + 1][i] - out.solutions[k][it->second]));
      ++matched;
    }
    if (matched == 0)
      throw Error(ErrorCode::SolverFailure, "no shared vertices on the compact");
    out.sup_diff.push_back(diff);
  }
  return out;
}

std::pair<double, double> gradient_bound_monitor(const SphericalMesh& mesh,
                                                 const ScalarField& v, int P,
                                                 double rho) {
  if (P < 0 || P >= mesh.vertex_count())
    throw Error(ErrorCode::InvalidArgument, "vertex index out of range");
  const std::vector<double> d = boundary_distance_values(mesh);
  if (!(d[P] > rho))
    throw Error(ErrorCode::DomainViolation,
                "geodesic ball exits the domain at the requested radius");
  const ScalarField W = slope_field(mesh, v);
  return {W[P], rho};
}

}  // namespace hypcmc
