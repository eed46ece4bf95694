/*
 * hypcmc - constant-mean-curvature radial graphs over hemisphere domains in
 * the half-space model of hyperbolic space.
 *
 * C interface to the solver library: opaque handles, integer status codes,
 * and a batch runner driven by flat key=value configuration text. All
 * functions returning hypcmc_status leave outputs untouched on failure; a
 * thread-local description of the last failure is available through
 * hypcmc_last_error().
 */

#ifndef HYPCMC_H
#define HYPCMC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hypcmc_status {
  HYPCMC_OK = 0,
  HYPCMC_ERR_INVALID_ARGUMENT = 1,
  HYPCMC_ERR_DOMAIN = 2,  /* geometry/containment violations */
  HYPCMC_ERR_SOLVER = 3,  /* iteration did not converge */
  HYPCMC_ERR_IO = 4,
  HYPCMC_ERR_INTERNAL = 5
} hypcmc_status;

typedef struct hypcmc_mesh hypcmc_mesh;
typedef struct hypcmc_field hypcmc_field;

/* Message describing the most recent failure on this thread. */
const char* hypcmc_last_error(void);

/* ------------------------------------------------------------------ mesh */

/* Spherical cap {y > eps} triangulated at the given subdivision level. */
hypcmc_status hypcmc_mesh_create_cap(double eps, int level, hypcmc_mesh** out);

/* Geodesic ball of radius rho around the unit vector center[3]. */
hypcmc_status hypcmc_mesh_create_geodesic_ball(const double center[3], double rho,
                                               int level, hypcmc_mesh** out);

/* Midpoint 1->4 refinement with boundary snapping. */
hypcmc_status hypcmc_mesh_refine(const hypcmc_mesh* mesh, hypcmc_mesh** out);

void hypcmc_mesh_free(hypcmc_mesh* mesh);

int hypcmc_mesh_vertex_count(const hypcmc_mesh* mesh);
int hypcmc_mesh_triangle_count(const hypcmc_mesh* mesh);

/* xyz: 3 * vertex_count doubles. */
hypcmc_status hypcmc_mesh_vertices(const hypcmc_mesh* mesh, double* xyz);
/* ijk: 3 * triangle_count int32 (0-based). */
hypcmc_status hypcmc_mesh_triangles(const hypcmc_mesh* mesh, int32_t* ijk);
/* flags: vertex_count int32, 1 on the boundary. */
hypcmc_status hypcmc_mesh_boundary_flags(const hypcmc_mesh* mesh, int32_t* flags);

/* Plain-text export: "n_vertices n_triangles", vertex lines
 * "x y z boundary_flag", triangle lines "i j k". */
hypcmc_status hypcmc_mesh_export(const hypcmc_mesh* mesh, const char* path);

/* Geodesic distance of every vertex to the mesh boundary. */
hypcmc_status hypcmc_mesh_boundary_distance(const hypcmc_mesh* mesh,
                                            hypcmc_field** out);

/* ----------------------------------------------------------------- field */

hypcmc_status hypcmc_field_create(const hypcmc_mesh* mesh, double fill,
                                  hypcmc_field** out);
hypcmc_status hypcmc_field_from_values(const hypcmc_mesh* mesh, const double* values,
                                       hypcmc_field** out);
int hypcmc_field_size(const hypcmc_field* field);
hypcmc_status hypcmc_field_values(const hypcmc_field* field, double* out);
void hypcmc_field_free(hypcmc_field* field);

/* CSV export with columns vertex_id,x,y,z,value. */
hypcmc_status hypcmc_field_export_csv(const hypcmc_mesh* mesh,
                                      const hypcmc_field* field, const char* path);

/* -------------------------------------------------------------- geometry */

/* Equidistant-sphere profile c + log(sqrt(H^2 y^2 + 1 - H^2) - H y). */
hypcmc_status hypcmc_exact_solution(const hypcmc_mesh* mesh, double H, double c,
                                    hypcmc_field** out);

/* Hyperbolic curvature from Euclidean curvature: u kappa_e + nu_vertical. */
hypcmc_status hypcmc_curvature_convert(double u, double kappa_e, double nu_vertical,
                                       double* out);

/* Per-vertex hyperbolic mean curvature estimate of the graph e^{v} z. */
hypcmc_status hypcmc_mean_curvature(const hypcmc_mesh* mesh, const hypcmc_field* v,
                                    hypcmc_field** out);

/* Slope field W = sqrt(1 + |grad v|^2). */
hypcmc_status hypcmc_slope(const hypcmc_mesh* mesh, const hypcmc_field* v,
                           hypcmc_field** out);

/* ---------------------------------------------------------------- energy */

typedef struct hypcmc_energy_breakdown {
  double area;
  double volume;
  double penalty;
  double total;
} hypcmc_energy_breakdown;

/* Weighted area + n H volume of the graph of v (no penalty term). */
hypcmc_status hypcmc_energy(const hypcmc_mesh* mesh, const hypcmc_field* v, int n,
                            double H, hypcmc_energy_breakdown* out);

/* ---------------------------------------------------------------- solver */

typedef struct hypcmc_solve_options {
  double grad_tol;    /* max-norm gradient target, default 1e-10 */
  int max_newton;     /* default 60 */
  double cg_rel_tol;  /* default 1e-12 */
  int penalty_mode;   /* 0 strong Dirichlet, 1 boundary penalty */
} hypcmc_solve_options;

void hypcmc_solve_options_default(hypcmc_solve_options* opts);

typedef struct hypcmc_solve_report {
  int iterations;
  double final_grad_norm;
  double residual_divform;
  int sandwich_ok;
  hypcmc_energy_breakdown energy;
} hypcmc_solve_report;

/* Minimizes the energy with boundary values taken from phi. */
hypcmc_status hypcmc_solve_dirichlet(const hypcmc_mesh* mesh, const hypcmc_field* phi,
                                     double H, const hypcmc_solve_options* opts,
                                     hypcmc_field** v_out,
                                     hypcmc_solve_report* report);

/* -------------------------------------------------------------- barriers */

/* Hyperbolic mean curvature of the radial cone over the boundary; h gets one
 * value per vertex (interior entries are NaN), margin = min h - |H|. */
hypcmc_status hypcmc_cone_mean_curvature(const hypcmc_mesh* mesh, double H,
                                         double* h_per_vertex, double* margin);

typedef struct hypcmc_barrier_info {
  double K;
  double delta;
  double M;
  int accepted;
  double upper_residual;
  double lower_residual;
} hypcmc_barrier_info;

/* Boundary barrier pair attached to the ambient data phi. */
hypcmc_status hypcmc_boundary_barriers(const hypcmc_mesh* mesh,
                                       const hypcmc_field* phi, double H,
                                       double margin_required,
                                       hypcmc_field** lower, hypcmc_field** upper,
                                       hypcmc_barrier_info* info);

/* ---------------------------------------------------------------- oracle */

/* Rotationally symmetric reference solve; theta/v arrays must hold
 * grid_points + 1 entries. */
hypcmc_status hypcmc_axisym_solve(int n, double H, double theta_max,
                                  double boundary_value, int grid_points,
                                  double* theta_out, double* v_out);

/* ---------------------------------------------------------------- runner */

/* Executes one batch command from flat key=value configuration text (the
 * same format the command-line tool uses). Writes artifacts to the directory
 * named by the "out" key. Returns the process exit status: 0 success,
 * 1 failed check, 2 usage error. A description is copied to msgbuf. */
int hypcmc_run(const char* config_text, char* msgbuf, size_t msgbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* HYPCMC_H */
