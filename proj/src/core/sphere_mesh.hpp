#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypcmc {

using Vec3 = Eigen::Vector3d;

enum class ErrorCode {
  InvalidArgument,
  DomainViolation,
  SolverFailure,
  IoFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Spherical primitives. All points are unit vectors in R^3; the height of a
// point z is y = z.z() (the component along the vertical axis e = (0,0,1)).
// ---------------------------------------------------------------------------

/// Great-circle distance between two unit vectors.
double arc_length(const Vec3& a, const Vec3& b);

/// Signed spherical excess of the geodesic triangle (a,b,c); positive for
/// counterclockwise orientation seen from outside the sphere.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Spherical linear interpolation between unit vectors.
Vec3 slerp(const Vec3& a, const Vec3& b, double t);

/// Deterministic orthonormal tangent basis at a unit vector.
void tangent_basis(const Vec3& z, Vec3& t1, Vec3& t2);

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

struct DomainSpec {
  enum class Kind { Cap, GeodesicBall };

  Kind kind = Kind::Cap;
  double eps = 0.5;             // cap boundary height: domain is {y > eps}
  Vec3 center = Vec3(0, 0, 1);  // geodesic ball center
  double rho = 0.4;             // geodesic ball radius
  int refinement_level = 0;

  static DomainSpec cap(double eps, int level);
  static DomainSpec geodesic_ball(const Vec3& center, double rho, int level);

  void validate() const;  // throws Error on violation
};

struct MeshEdge {
  int a = -1, b = -1;    // vertex ids, a < b
  int t0 = -1, t1 = -1;  // incident triangles; t1 == -1 on the boundary
  double arc = 0.0;      // geodesic length
  double y_mid = 0.0;    // height of the normalized midpoint
  bool boundary() const { return t1 < 0; }
};

// ---------------------------------------------------------------------------
// Triangulated subdomain of the open upper hemisphere.
//
// Invariants (checked by finalize()):
//   * every vertex has unit norm to 1e-12 and height y > 0,
//   * interior edges have exactly two incident triangles, boundary edges one,
//   * boundary edges form closed, non-self-intersecting loops,
//   * triangles are consistently oriented outward (positive spherical excess).
//
// Meshes are immutable after construction and safe to share across threads.
// ---------------------------------------------------------------------------
class SphericalMesh {
 public:
  DomainSpec domain;

  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> boundary_flag;  // per vertex

  std::vector<MeshEdge> edges;
  // Ordered boundary loops, traversed with the domain on the left.
  std::vector<std::vector<int>> boundary_loops;

  // Per-triangle quadrature data.
  std::vector<double> tri_area;               // spherical excess
  std::vector<double> tri_y;                  // y at the normalized centroid
  std::vector<std::array<Vec3, 3>> tri_grad;  // flat P1 shape gradients

  // Adjacency.
  std::vector<std::vector<int>> vertex_tris;
  std::vector<std::vector<int>> vertex_neighbors;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  double y(int i) const { return vertices[i].z(); }
  bool is_boundary(int i) const { return boundary_flag[i] != 0; }
  const std::vector<int>& boundary_vertices() const { return boundary_verts_; }

  double total_area() const;      // sum of spherical excesses
  double max_edge_arc() const;
  int nearest_vertex(const Vec3& p) const;

  /// Orients triangles, builds edges/loops/adjacency/quadrature caches and
  /// checks all mesh invariants. Must be called once after construction.
  void finalize();

  /// Plain-text export: header "n_vertices n_triangles", vertex lines
  /// "x y z boundary_flag", then triangle lines "i j k" (0-based).
  void export_text(const std::string& path) const;
  std::string export_string() const;

 private:
  std::vector<int> boundary_verts_;
};

SphericalMesh build_mesh(const DomainSpec& spec);

/// Midpoint 1->4 subdivision; midpoints reprojected to the sphere and
/// boundary midpoints snapped back onto the exact domain boundary curve.
SphericalMesh refine(const SphericalMesh& mesh);

/// Full icosphere (no boundary); used internally and by tests.
SphericalMesh make_icosphere(int level);

/// Distance of every vertex to the mesh boundary in the spherical metric.
/// Multi-source Dijkstra over vertices with two-point triangle updates
/// (linear wavefront interpolation across settled edges), which converges to
/// the true geodesic distance under refinement. Throws if the boundary is
/// empty. Returned values satisfy d = 0 on the boundary and the 1-Lipschitz
/// bound |d(a) - d(b)| <= arc(a,b) along edges.
std::vector<double> boundary_distance_values(const SphericalMesh& mesh);

}  // namespace hypcmc
