#include "hypcmc.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "core/axisym.hpp"
#include "core/barriers.hpp"
#include "core/energy.hpp"
#include "core/geometry.hpp"
#include "core/runner.hpp"
#include "core/solver.hpp"
#include "core/sphere_mesh.hpp"

struct hypcmc_mesh {
  hypcmc::SphericalMesh impl;
};

struct hypcmc_field {
  hypcmc::ScalarField impl;
};

namespace {

thread_local std::string g_last_error;

hypcmc_status status_of(const hypcmc::Error& e) {
  switch (e.code()) {
    case hypcmc::ErrorCode::InvalidArgument:
      return HYPCMC_ERR_INVALID_ARGUMENT;
    case hypcmc::ErrorCode::DomainViolation:
      return HYPCMC_ERR_DOMAIN;
    case hypcmc::ErrorCode::SolverFailure:
      return HYPCMC_ERR_SOLVER;
    case hypcmc::ErrorCode::IoFailure:
      return HYPCMC_ERR_IO;
  }
  return HYPCMC_ERR_INTERNAL;
}

template <typename Fn>
hypcmc_status guarded(Fn&& fn) {
  try {
    fn();
    return HYPCMC_OK;
  } catch (const hypcmc::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HYPCMC_ERR_INTERNAL;
  }
}

hypcmc_status require(bool cond, const char* what) {
  if (!cond) {
    g_last_error = what;
    return HYPCMC_ERR_INVALID_ARGUMENT;
  }
  return HYPCMC_OK;
}

hypcmc_energy_breakdown to_c(const hypcmc::EnergyBreakdown& e) {
  return {e.area, e.volume, e.penalty, e.total};
}

}  // namespace

extern "C" {

const char* hypcmc_last_error(void) { return g_last_error.c_str(); }

hypcmc_status hypcmc_mesh_create_cap(double eps, int level, hypcmc_mesh** out) {
  if (auto s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    auto* m = new hypcmc_mesh{hypcmc::build_mesh(hypcmc::DomainSpec::cap(eps, level))};
    *out = m;
  });
}

hypcmc_status hypcmc_mesh_create_geodesic_ball(const double center[3], double rho,
                                               int level, hypcmc_mesh** out) {
  if (auto s = require(out && center, "null pointer argument")) return s;
  return guarded([&] {
    const hypcmc::Vec3 c(center[0], center[1], center[2]);
    auto* m = new hypcmc_mesh{
        hypcmc::build_mesh(hypcmc::DomainSpec::geodesic_ball(c, rho, level))};
    *out = m;
  });
}

hypcmc_status hypcmc_mesh_refine(const hypcmc_mesh* mesh, hypcmc_mesh** out) {
  if (auto s = require(mesh && out, "null pointer argument")) return s;
  return guarded([&] { *out = new hypcmc_mesh{hypcmc::refine(mesh->impl)}; });
}

void hypcmc_mesh_free(hypcmc_mesh* mesh) { delete mesh; }

int hypcmc_mesh_vertex_count(const hypcmc_mesh* mesh) {
  return mesh ? mesh->impl.vertex_count() : 0;
}

int hypcmc_mesh_triangle_count(const hypcmc_mesh* mesh) {
  return mesh ? mesh->impl.triangle_count() : 0;
}

hypcmc_status hypcmc_mesh_vertices(const hypcmc_mesh* mesh, double* xyz) {
  if (auto s = require(mesh && xyz, "null pointer argument")) return s;
  for (int i = 0; i < mesh->impl.vertex_count(); ++i) {
    xyz[3 * i + 0] = mesh->impl.vertices[i].x();
    xyz[3 * i + 1] = mesh->impl.vertices[i].y();
    xyz[3 * i + 2] = mesh->impl.vertices[i].z();
  }
  return HYPCMC_OK;
}

hypcmc_status hypcmc_mesh_triangles(const hypcmc_mesh* mesh, int32_t* ijk) {
  if (auto s = require(mesh && ijk, "null pointer argument")) return s;
  for (int t = 0; t < mesh->impl.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) ijk[3 * t + k] = mesh->impl.triangles[t][k];
  return HYPCMC_OK;
}

hypcmc_status hypcmc_mesh_boundary_flags(const hypcmc_mesh* mesh, int32_t* flags) {
  if (auto s = require(mesh && flags, "null pointer argument")) return s;
  for (int i = 0; i < mesh->impl.vertex_count(); ++i)
    flags[i] = mesh->impl.is_boundary(i) ? 1 : 0;
  return HYPCMC_OK;
}

hypcmc_status hypcmc_mesh_export(const hypcmc_mesh* mesh, const char* path) {
  if (auto s = require(mesh && path, "null pointer argument")) return s;
  return guarded([&] { mesh->impl.export_text(path); });
}

hypcmc_status hypcmc_mesh_boundary_distance(const hypcmc_mesh* mesh,
                                            hypcmc_field** out) {
  if (auto s = require(mesh && out, "null pointer argument")) return s;
  return guarded([&] { *out = new hypcmc_field{hypcmc::boundary_distance(mesh->impl)}; });
}

hypcmc_status hypcmc_field_create(const hypcmc_mesh* mesh, double fill,
                                  hypcmc_field** out) {
  if (auto s = require(mesh && out, "null pointer argument")) return s;
  *out = new hypcmc_field{hypcmc::ScalarField(mesh->impl.vertex_count(), fill)};
  return HYPCMC_OK;
}

hypcmc_status hypcmc_field_from_values(const hypcmc_mesh* mesh, const double* values,
                                       hypcmc_field** out) {
  if (auto s = require(mesh && values && out, "null pointer argument")) return s;
  return guarded([&] {
    hypcmc::ScalarField f(
        std::vector<double>(values, values + mesh->impl.vertex_count()));
    f.check_on(mesh->impl);
    *out = new hypcmc_field{std::move(f)};
  });
}

int hypcmc_field_size(const hypcmc_field* field) {
  return field ? field->impl.size() : 0;
}

hypcmc_status hypcmc_field_values(const hypcmc_field* field, double* out) {
  if (auto s = require(field && out, "null pointer argument")) return s;
  std::memcpy(out, field->impl.values.data(), field->impl.size() * sizeof(double));
  return HYPCMC_OK;
}

void hypcmc_field_free(hypcmc_field* field) { delete field; }

hypcmc_status hypcmc_field_export_csv(const hypcmc_mesh* mesh,
                                      const hypcmc_field* field, const char* path) {
  if (auto s = require(mesh && field && path, "null pointer argument")) return s;
  return guarded([&] { hypcmc::export_field_csv(mesh->impl, field->impl, path); });
}

hypcmc_status hypcmc_exact_solution(const hypcmc_mesh* mesh, double H, double c,
                                    hypcmc_field** out) {
  if (auto s = require(mesh && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new hypcmc_field{hypcmc::exact_solution_eval(
        hypcmc::ExactEquidistantSolution(H, c), mesh->impl)};
  });
}

hypcmc_status hypcmc_curvature_convert(double u, double kappa_e, double nu_vertical,
                                       double* out) {
  if (auto s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] { *out = hypcmc::curvature_convert(u, kappa_e, nu_vertical); });
}

hypcmc_status hypcmc_mean_curvature(const hypcmc_mesh* mesh, const hypcmc_field* v,
                                    hypcmc_field** out) {
  if (auto s = require(mesh && v && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new hypcmc_field{hypcmc::hyperbolic_mean_curvature(mesh->impl, v->impl)};
  });
}

hypcmc_status hypcmc_slope(const hypcmc_mesh* mesh, const hypcmc_field* v,
                           hypcmc_field** out) {
  if (auto s = require(mesh && v && out, "null pointer argument")) return s;
  return guarded([&] { *out = new hypcmc_field{hypcmc::slope_field(mesh->impl, v->impl)}; });
}

hypcmc_status hypcmc_energy(const hypcmc_mesh* mesh, const hypcmc_field* v, int n,
                            double H, hypcmc_energy_breakdown* out) {
  if (auto s = require(mesh && v && out, "null pointer argument")) return s;
  return guarded([&] { *out = to_c(hypcmc::assemble_energy(mesh->impl, v->impl, n, H)); });
}

void hypcmc_solve_options_default(hypcmc_solve_options* opts) {
  if (!opts) return;
  opts->grad_tol = 1e-10;
  opts->max_newton = 60;
  opts->cg_rel_tol = 1e-12;
  opts->penalty_mode = 0;
}

hypcmc_status hypcmc_solve_dirichlet(const hypcmc_mesh* mesh, const hypcmc_field* phi,
                                     double H, const hypcmc_solve_options* opts,
                                     hypcmc_field** v_out,
                                     hypcmc_solve_report* report) {
  if (auto s = require(mesh && phi && v_out, "null pointer argument")) return s;
  return guarded([&] {
    hypcmc::SolveOptions o;
    if (opts) {
      o.grad_tol = opts->grad_tol;
      o.max_newton = opts->max_newton;
      o.cg_rel_tol = opts->cg_rel_tol;
      o.mode = opts->penalty_mode ? hypcmc::SolveOptions::Mode::Penalty
                                  : hypcmc::SolveOptions::Mode::StrongDirichlet;
    }
    hypcmc::SolveReport rep = hypcmc::solve_dirichlet(mesh->impl, phi->impl, H, o);
    if (report) {
      report->iterations = rep.iterations;
      report->final_grad_norm = rep.final_grad_norm;
      report->residual_divform = rep.residual_divform;
      report->sandwich_ok = rep.sandwich_ok ? 1 : 0;
      report->energy = to_c(rep.energy);
    }
    *v_out = new hypcmc_field{std::move(rep.v)};
  });
}

hypcmc_status hypcmc_cone_mean_curvature(const hypcmc_mesh* mesh, double H,
                                         double* h_per_vertex, double* margin) {
  if (auto s = require(mesh && h_per_vertex && margin, "null pointer argument"))
    return s;
  return guarded([&] {
    const hypcmc::ConeCurvatureReport rep =
        hypcmc::cone_mean_curvature(mesh->impl, H);
    for (int i = 0; i < mesh->impl.vertex_count(); ++i)
      h_per_vertex[i] = std::numeric_limits<double>::quiet_NaN();
    for (size_t k = 0; k < rep.vertex_ids.size(); ++k)
      h_per_vertex[rep.vertex_ids[k]] = rep.h[k];
    *margin = rep.margin;
  });
}

hypcmc_status hypcmc_boundary_barriers(const hypcmc_mesh* mesh,
                                       const hypcmc_field* phi, double H,
                                       double margin_required,
                                       hypcmc_field** lower, hypcmc_field** upper,
                                       hypcmc_barrier_info* info) {
  if (auto s = require(mesh && phi && lower && upper, "null pointer argument"))
    return s;
  return guarded([&] {
    hypcmc::BarrierPair pair =
        hypcmc::boundary_barriers(mesh->impl, phi->impl, H, margin_required);
    if (info) {
      info->K = pair.K;
      info->delta = pair.delta;
      info->M = pair.M;
      info->accepted = pair.accepted ? 1 : 0;
      info->upper_residual = pair.upper_residual;
      info->lower_residual = pair.lower_residual;
    }
    *lower = new hypcmc_field{std::move(pair.lower)};
    *upper = new hypcmc_field{std::move(pair.upper)};
  });
}

hypcmc_status hypcmc_axisym_solve(int n, double H, double theta_max,
                                  double boundary_value, int grid_points,
                                  double* theta_out, double* v_out) {
  if (auto s = require(theta_out && v_out, "null pointer argument")) return s;
  return guarded([&] {
    hypcmc::AxisymProblem p;
    p.n = n;
    p.H = H;
    p.theta_max = theta_max;
    p.boundary_value = boundary_value;
    p.grid_points = grid_points;
    const hypcmc::AxisymProfile prof = hypcmc::solve_axisym(p);
    std::memcpy(theta_out, prof.theta.data(), prof.theta.size() * sizeof(double));
    std::memcpy(v_out, prof.v.data(), prof.v.size() * sizeof(double));
  });
}

int hypcmc_run(const char* config_text, char* msgbuf, size_t msgbuf_len) {
  if (!config_text) {
    if (msgbuf && msgbuf_len) std::snprintf(msgbuf, msgbuf_len, "null configuration");
    return 2;
  }
  hypcmc::RunOutcome out;
  try {
    out = hypcmc::run_config_text(config_text);
  } catch (const std::exception& e) {
    out = {2, e.what()};
  }
  if (msgbuf && msgbuf_len) std::snprintf(msgbuf, msgbuf_len, "%s", out.message.c_str());
  return out.status;
}

}  // extern "C"
