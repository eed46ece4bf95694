#include "core/sphere_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

namespace hypcmc {

namespace {
constexpr double kUnitTol = 1e-12;
constexpr double kPi = std::numbers::pi;
}  // namespace

double arc_length(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  // Van Oosterom & Strackee: tan(E/2) = a.(b x c) / (1 + a.b + b.c + c.a).
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double ang = arc_length(a, b);
  if (ang < 1e-15) return a;
  const double s = std::sin(ang);
  Vec3 p = (std::sin((1.0 - t) * ang) / s) * a + (std::sin(t * ang) / s) * b;
  return p.normalized();
}

void tangent_basis(const Vec3& z, Vec3& t1, Vec3& t2) {
  Vec3 ref = std::abs(z.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  t1 = (ref - ref.dot(z) * z).normalized();
  t2 = z.cross(t1);
}

// ---------------------------------------------------------------------------
// DomainSpec
// ---------------------------------------------------------------------------

DomainSpec DomainSpec::cap(double eps, int level) {
  DomainSpec s;
  s.kind = Kind::Cap;
  s.eps = eps;
  s.refinement_level = level;
  s.validate();
  return s;
}

DomainSpec DomainSpec::geodesic_ball(const Vec3& center, double rho, int level) {
  DomainSpec s;
  s.kind = Kind::GeodesicBall;
  if (center.norm() < 1e-14)
    throw Error(ErrorCode::InvalidArgument, "geodesic ball center must be nonzero");
  s.center = center.normalized();
  s.rho = rho;
  s.refinement_level = level;
  s.validate();
  return s;
}

void DomainSpec::validate() const {
  if (refinement_level < 0)
    throw Error(ErrorCode::InvalidArgument, "refinement level must be >= 0");
  if (kind == Kind::Cap) {
    if (!(eps > 0.0 && eps < 1.0))
      throw Error(ErrorCode::DomainViolation, "cap parameter must lie in (0,1)");
  } else {
    if (!(rho > 0.0 && rho < kPi / 2))
      throw Error(ErrorCode::DomainViolation, "ball radius must lie in (0, pi/2)");
    const double dist_to_pole = arc_length(center, Vec3(0, 0, 1));
    // Closure contained in the open upper hemisphere.
    if (!(dist_to_pole + rho < kPi / 2))
      throw Error(ErrorCode::DomainViolation,
                  "geodesic ball not contained in the open upper hemisphere");
  }
}

// ---------------------------------------------------------------------------
// SphericalMesh: finalize + invariants
// ---------------------------------------------------------------------------

void SphericalMesh::finalize() {
  const int nv = vertex_count();
  const int nt = triangle_count();

  for (int i = 0; i < nv; ++i) {
    if (std::abs(vertices[i].norm() - 1.0) > kUnitTol)
      throw Error(ErrorCode::DomainViolation, "vertex not on the unit sphere");
    if (!(vertices[i].z() > 0.0))
      throw Error(ErrorCode::DomainViolation, "vertex height y must be positive");
  }

  // Consistent outward orientation: positive spherical excess.
  for (auto& t : triangles) {
    if (spherical_triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) < 0)
      std::swap(t[1], t[2]);
  }

  // Edge table.
  edges.clear();
  std::map<std::pair<int, int>, int> edge_of;
  for (int ti = 0; ti < nt; ++ti) {
    const auto& t = triangles[ti];
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        MeshEdge e;
        e.a = key.first;
        e.b = key.second;
        e.t0 = ti;
        e.arc = arc_length(vertices[e.a], vertices[e.b]);
        e.y_mid = (vertices[e.a] + vertices[e.b]).normalized().z();
        edge_of.emplace(key, static_cast<int>(edges.size()));
        edges.push_back(e);
      } else {
        MeshEdge& e = edges[it->second];
        if (e.t1 >= 0)
          throw Error(ErrorCode::DomainViolation, "edge shared by more than two triangles");
        e.t1 = ti;
      }
    }
  }

  // Boundary flags from edge incidence.
  boundary_flag.assign(nv, 0);
  for (const auto& e : edges) {
    if (e.boundary()) {
      boundary_flag[e.a] = 1;
      boundary_flag[e.b] = 1;
    }
  }
  boundary_verts_.clear();
  for (int i = 0; i < nv; ++i)
    if (boundary_flag[i]) boundary_verts_.push_back(i);

  // Adjacency.
  vertex_tris.assign(nv, {});
  vertex_neighbors.assign(nv, {});
  for (int ti = 0; ti < nt; ++ti)
    for (int k = 0; k < 3; ++k) vertex_tris[triangles[ti][k]].push_back(ti);
  for (const auto& e : edges) {
    vertex_neighbors[e.a].push_back(e.b);
    vertex_neighbors[e.b].push_back(e.a);
  }
  for (auto& nb : vertex_neighbors) std::sort(nb.begin(), nb.end());

  // Boundary loops with the domain on the left: a boundary edge belongs to
  // exactly one triangle; traversing it in that triangle's winding order
  // leaves the interior on the left (outward-oriented triangles).
  std::map<int, int> next_on_loop;  // directed boundary edge a->b
  for (const auto& e : edges) {
    if (!e.boundary()) continue;
    const auto& t = triangles[e.t0];
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      if ((a == e.a && b == e.b) || (a == e.b && b == e.a)) {
        if (next_on_loop.count(a))
          throw Error(ErrorCode::DomainViolation, "boundary is self-intersecting");
        next_on_loop[a] = b;
      }
    }
  }
  boundary_loops.clear();
  {
    std::map<int, char> visited;
    for (const auto& kv : next_on_loop) visited[kv.first] = 0;
    for (const auto& kv : next_on_loop) {
      if (visited[kv.first]) continue;
      std::vector<int> loop;
      int start = kv.first, cur = start;
      while (true) {
        loop.push_back(cur);
        visited[cur] = 1;
        auto it = next_on_loop.find(cur);
        if (it == next_on_loop.end())
          throw Error(ErrorCode::DomainViolation, "boundary loop is not closed");
        cur = it->second;
        if (cur == start) break;
        if (static_cast<int>(loop.size()) > nv)
          throw Error(ErrorCode::DomainViolation, "boundary loop does not close");
      }
      boundary_loops.push_back(std::move(loop));
    }
  }

  // Quadrature caches.
  tri_area.resize(nt);
  tri_y.resize(nt);
  tri_grad.resize(nt);
  for (int ti = 0; ti < nt; ++ti) {
    const Vec3& p0 = vertices[triangles[ti][0]];
    const Vec3& p1 = vertices[triangles[ti][1]];
    const Vec3& p2 = vertices[triangles[ti][2]];
    tri_area[ti] = spherical_triangle_area(p0, p1, p2);
    if (!(tri_area[ti] > 0))
      throw Error(ErrorCode::DomainViolation, "degenerate or flipped triangle");
    tri_y[ti] = (p0 + p1 + p2).normalized().z();
    const Vec3 n = (p1 - p0).cross(p2 - p0);
    const double nn = n.squaredNorm();
    if (nn < 1e-28)
      throw Error(ErrorCode::DomainViolation, "degenerate flat triangle");
    tri_grad[ti][0] = n.cross(p2 - p1) / nn;
    tri_grad[ti][1] = n.cross(p0 - p2) / nn;
    tri_grad[ti][2] = n.cross(p1 - p0) / nn;
  }
}

double SphericalMesh::total_area() const {
  double s = 0;
  for (double a : tri_area) s += a;
  return s;
}

double SphericalMesh::max_edge_arc() const {
  double m = 0;
  for (const auto& e : edges) m = std::max(m, e.arc);
  return m;
}

int SphericalMesh::nearest_vertex(const Vec3& p) const {
  int best = 0;
  double bd = -2;
  for (int i = 0; i < vertex_count(); ++i) {
    const double d = vertices[i].dot(p);
    if (d > bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

std::string SphericalMesh::export_string() const {
  std::ostringstream os;
  char buf[128];
  os << vertex_count() << " " << triangle_count() << "\n";
  for (int i = 0; i < vertex_count(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %d\n", vertices[i].x(),
                  vertices[i].y(), vertices[i].z(), boundary_flag[i] ? 1 : 0);
    os << buf;
  }
  for (const auto& t : triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  return os.str();
}

void SphericalMesh::export_text(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  f << export_string();
}

// ---------------------------------------------------------------------------
// Icosphere
// ---------------------------------------------------------------------------

namespace {

struct RawMesh {
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> t;
};

RawMesh icosahedron() {
  RawMesh m;
  m.v.push_back(Vec3(0, 0, 1));
  const double zr = 1.0 / std::sqrt(5.0);
  const double rr = 2.0 / std::sqrt(5.0);
  for (int k = 0; k < 5; ++k) {
    const double az = 2 * kPi * k / 5;
    m.v.push_back(Vec3(rr * std::cos(az), rr * std::sin(az), zr));
  }
  for (int k = 0; k < 5; ++k) {
    const double az = 2 * kPi * (k + 0.5) / 5;
    m.v.push_back(Vec3(rr * std::cos(az), rr * std::sin(az), -zr));
  }
  m.v.push_back(Vec3(0, 0, -1));
  for (int k = 0; k < 5; ++k) {
    int k1 = (k + 1) % 5;
    m.t.push_back({0, 1 + k, 1 + k1});
    m.t.push_back({1 + k, 6 + k, 1 + k1});
    m.t.push_back({1 + k1, 6 + k, 6 + k1});
    m.t.push_back({11, 6 + k1, 6 + k});
  }
  return m;
}

void subdivide(RawMesh& m) {
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    int idx = static_cast<int>(m.v.size());
    m.v.push_back((m.v[a] + m.v[b]).normalized());
    mid.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> out;
  out.reserve(m.t.size() * 4);
  for (const auto& t : m.t) {
    int ab = midpoint(t[0], t[1]);
    int bc = midpoint(t[1], t[2]);
    int ca = midpoint(t[2], t[0]);
    out.push_back({t[0], ab, ca});
    out.push_back({t[1], bc, ab});
    out.push_back({t[2], ca, bc});
    out.push_back({ab, bc, ca});
  }
  m.t = std::move(out);
}

RawMesh icosphere_raw(int level) {
  RawMesh m = icosahedron();
  for (int r = 0; r < level; ++r) subdivide(m);
  return m;
}

// Snap a point to the cap boundary circle {y = eps}, preserving azimuth.
Vec3 snap_to_cap_circle(const Vec3& p, double eps) {
  Vec3 h(p.x(), p.y(), 0.0);
  const double hn = h.norm();
  const double r = std::sqrt(1.0 - eps * eps);
  if (hn < 1e-14) {
    // Point at a pole: pick a deterministic azimuth (cannot occur for
    // vertices within snapping distance of the circle since eps < 1).
    return Vec3(r, 0.0, eps);
  }
  return Vec3(r * p.x() / hn, r * p.y() / hn, eps);
}

// Intersection of the great-circle arc from a to b with {y = eps}; requires a
// strict sign change of y - eps along the arc.
Vec3 arc_cap_intersection(const Vec3& a, const Vec3& b, double eps) {
  const double ang = arc_length(a, b);
  const double s = std::sin(ang);
  // y(t) = (a_z sin((1-t)ang) + b_z sin(t ang)) / sin(ang) = eps
  // c1 cos(x) + c2 sin(x) = c3 with x = t*ang.
  const double c1 = a.z();
  const double c2 = (b.z() - a.z() * std::cos(ang)) / s;
  const double c3 = eps;
  const double R = std::hypot(c1, c2);
  const double phase = std::atan2(c2, c1);
  const double ratio = std::clamp(c3 / R, -1.0, 1.0);
  double best_t = -1;
  for (double sign : {1.0, -1.0}) {
    const double x = phase + sign * std::acos(ratio);
    const double t = x / ang;
    if (t > 1e-12 && t < 1.0 - 1e-12) {
      best_t = t;
      break;
    }
  }
  if (best_t < 0) {
    // Fall back to bisection on y(t) - eps.
    double lo = 0, hi = 1;
    for (int it = 0; it < 200; ++it) {
      const double tm = 0.5 * (lo + hi);
      const double ym = slerp(a, b, tm).z();
      if ((ym - eps > 0) == (a.z() - eps > 0))
        lo = tm;
      else
        hi = tm;
    }
    best_t = 0.5 * (lo + hi);
  }
  return snap_to_cap_circle(slerp(a, b, best_t), eps);
}

// Tangential Laplacian smoothing of interior vertices within a few rings of
// the boundary; evens out the sliver triangles left by clipping. Interior
// vertex placement does not change the total spherical area of the
// triangulated polygon.
void smooth_near_boundary(SphericalMesh& mesh, int rings, int iterations) {
  std::vector<int> depth(mesh.vertex_count(), -1);
  std::vector<int> frontier;
  for (int b : mesh.boundary_vertices()) {
    depth[b] = 0;
    frontier.push_back(b);
  }
  for (int r = 1; r <= rings; ++r) {
    std::vector<int> next;
    for (int u : frontier)
      for (int w : mesh.vertex_neighbors[u])
        if (depth[w] < 0) {
          depth[w] = r;
          next.push_back(w);
        }
    frontier = std::move(next);
  }
  for (int it = 0; it < iterations; ++it) {
    std::vector<Vec3> pos = mesh.vertices;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      if (depth[i] <= 0) continue;  // boundary and far vertices stay put
      Vec3 avg = Vec3::Zero();
      for (int w : mesh.vertex_neighbors[i]) avg += mesh.vertices[w];
      pos[i] = avg.normalized();
    }
    mesh.vertices = std::move(pos);
  }
  mesh.finalize();
}

SphericalMesh build_cap(const DomainSpec& spec) {
  RawMesh raw = icosphere_raw(spec.refinement_level);
  const double eps = spec.eps;
  const double typical_edge = 1.1071487177940904 / std::pow(2.0, spec.refinement_level);
  const double snap_tol = 0.15 * typical_edge;

  // Snap vertices close to the circle onto it to avoid slivers.
  for (auto& p : raw.v) {
    if (std::abs(p.z() - eps) < snap_tol && std::hypot(p.x(), p.y()) > 1e-10)
      p = snap_to_cap_circle(p, eps);
  }

  auto strictly_out = [&](int i) { return raw.v[i].z() < eps - 1e-15; };
  auto inside = [&](int i) { return !strictly_out(i); };

  // Per-edge intersection points, shared between adjacent triangles.
  std::map<std::pair<int, int>, int> cut_of;
  std::vector<Vec3> verts = raw.v;
  auto cut_point = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = cut_of.find(key);
    if (it != cut_of.end()) return it->second;
    int idx = static_cast<int>(verts.size());
    verts.push_back(arc_cap_intersection(raw.v[a], raw.v[b], eps));
    cut_of.emplace(key, idx);
    return idx;
  };

  std::vector<std::array<int, 3>> tris;
  for (const auto& t : raw.t) {
    int nout = strictly_out(t[0]) + strictly_out(t[1]) + strictly_out(t[2]);
    if (nout == 3) continue;
    if (nout == 0) {
      tris.push_back(t);
      continue;
    }
    // Clip the triangle polygon against {y >= eps}.
    std::vector<int> poly;
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      if (inside(a)) poly.push_back(a);
      const bool cross = (raw.v[a].z() - eps > 1e-15 && strictly_out(b)) ||
                         (strictly_out(a) && raw.v[b].z() - eps > 1e-15);
      if (cross) poly.push_back(cut_point(a, b));
    }
    // Drop consecutive duplicates (can appear when a snapped vertex
    // coincides with a cut point).
    std::vector<int> clean;
    for (int id : poly) {
      if (clean.empty() || (verts[clean.back()] - verts[id]).norm() > 1e-13)
        clean.push_back(id);
    }
    while (clean.size() >= 2 &&
           (verts[clean.front()] - verts[clean.back()]).norm() <= 1e-13)
      clean.pop_back();
    if (clean.size() < 3) continue;
    for (size_t k = 1; k + 1 < clean.size(); ++k)
      tris.push_back({clean[0], clean[k], clean[k + 1]});
  }

  // Compact unreferenced vertices.
  std::vector<int> remap(verts.size(), -1);
  SphericalMesh mesh;
  mesh.domain = spec;
  for (auto& t : tris) {
    for (int& id : t) {
      if (remap[id] < 0) {
        remap[id] = mesh.vertex_count();
        mesh.vertices.push_back(verts[id]);
      }
      id = remap[id];
    }
  }
  mesh.triangles = std::move(tris);
  mesh.finalize();
  smooth_near_boundary(mesh, 2, 3);
  return mesh;
}

SphericalMesh build_geodesic_ball(const DomainSpec& spec) {
  const int m = std::max(1, 1 << spec.refinement_level);  // rings
  const Vec3 P = spec.center;
  Vec3 t1, t2;
  tangent_basis(P, t1, t2);
  auto at = [&](double r, double az) {
    return (std::cos(r) * P + std::sin(r) * (std::cos(az) * t1 + std::sin(az) * t2))
        .normalized();
  };

  SphericalMesh mesh;
  mesh.domain = spec;
  mesh.vertices.push_back(P);
  std::vector<int> ring_start(m + 1, 0);
  for (int j = 1; j <= m; ++j) {
    ring_start[j] = mesh.vertex_count();
    const double r = spec.rho * j / m;
    const int cnt = 6 * j;
    for (int i = 0; i < cnt; ++i)
      mesh.vertices.push_back(at(r, 2 * kPi * i / cnt));
  }
  auto ring_idx = [&](int j, int i) {
    if (j == 0) return 0;
    const int cnt = 6 * j;
    return ring_start[j] + ((i % cnt) + cnt) % cnt;
  };
  // Hexagonal sector triangulation between consecutive rings.
  for (int j = 1; j <= m; ++j) {
    for (int s = 0; s < 6; ++s) {
      for (int tq = 0; tq < j; ++tq) {
        const int outer = s * j + tq;
        mesh.triangles.push_back(
            {ring_idx(j, outer), ring_idx(j, outer + 1), ring_idx(j - 1, s * (j - 1) + tq)});
        if (tq + 1 < j) {
          mesh.triangles.push_back({ring_idx(j - 1, s * (j - 1) + tq), ring_idx(j, outer + 1),
                                    ring_idx(j - 1, s * (j - 1) + tq + 1)});
        }
      }
    }
  }
  mesh.finalize();
  return mesh;
}

}  // namespace

SphericalMesh build_mesh(const DomainSpec& spec) {
  spec.validate();
  if (spec.kind == DomainSpec::Kind::Cap) return build_cap(spec);
  return build_geodesic_ball(spec);
}

SphericalMesh make_icosphere(int level) {
  // Shift nothing: the full sphere has vertices with y <= 0, so bypass the
  // hemisphere checks. Used only for internal tests of boundary handling.
  RawMesh raw = icosphere_raw(level);
  SphericalMesh mesh;
  mesh.vertices = std::move(raw.v);
  mesh.triangles = std::move(raw.t);
  // finalize() would reject y <= 0; replicate the minimal parts needed.
  for (auto& t : mesh.triangles) {
    if (spherical_triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                mesh.vertices[t[2]]) < 0)
      std::swap(t[1], t[2]);
  }
  std::map<std::pair<int, int>, int> edge_of;
  for (int ti = 0; ti < mesh.triangle_count(); ++ti) {
    const auto& t = mesh.triangles[ti];
    for (int k = 0; k < 3; ++k) {
      auto key = std::minmax(t[k], t[(k + 1) % 3]);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        MeshEdge e;
        e.a = key.first;
        e.b = key.second;
        e.t0 = ti;
        e.arc = arc_length(mesh.vertices[e.a], mesh.vertices[e.b]);
        e.y_mid = (mesh.vertices[e.a] + mesh.vertices[e.b]).normalized().z();
        edge_of.emplace(key, static_cast<int>(mesh.edges.size()));
        mesh.edges.push_back(e);
      } else {
        mesh.edges[it->second].t1 = ti;
      }
    }
  }
  mesh.boundary_flag.assign(mesh.vertex_count(), 0);
  mesh.vertex_tris.assign(mesh.vertex_count(), {});
  mesh.vertex_neighbors.assign(mesh.vertex_count(), {});
  for (int ti = 0; ti < mesh.triangle_count(); ++ti)
    for (int k = 0; k < 3; ++k) mesh.vertex_tris[mesh.triangles[ti][k]].push_back(ti);
  for (const auto& e : mesh.edges) {
    mesh.vertex_neighbors[e.a].push_back(e.b);
    mesh.vertex_neighbors[e.b].push_back(e.a);
  }
  mesh.tri_area.resize(mesh.triangle_count());
  mesh.tri_y.resize(mesh.triangle_count());
  mesh.tri_grad.resize(mesh.triangle_count());
  for (int ti = 0; ti < mesh.triangle_count(); ++ti) {
    const Vec3& p0 = mesh.vertices[mesh.triangles[ti][0]];
    const Vec3& p1 = mesh.vertices[mesh.triangles[ti][1]];
    const Vec3& p2 = mesh.vertices[mesh.triangles[ti][2]];
    mesh.tri_area[ti] = spherical_triangle_area(p0, p1, p2);
    mesh.tri_y[ti] = (p0 + p1 + p2).normalized().z();
    const Vec3 n = (p1 - p0).cross(p2 - p0);
    const double nn = n.squaredNorm();
    mesh.tri_grad[ti][0] = n.cross(p2 - p1) / nn;
    mesh.tri_grad[ti][1] = n.cross(p0 - p2) / nn;
    mesh.tri_grad[ti][2] = n.cross(p1 - p0) / nn;
  }
  return mesh;
}

SphericalMesh refine(const SphericalMesh& mesh) {
  SphericalMesh out;
  out.domain = mesh.domain;
  out.domain.refinement_level = mesh.domain.refinement_level + 1;
  out.vertices = mesh.vertices;

  auto snap_boundary = [&](const Vec3& p) {
    if (mesh.domain.kind == DomainSpec::Kind::Cap)
      return snap_to_cap_circle(p, mesh.domain.eps);
    const Vec3& P = mesh.domain.center;
    Vec3 u = p - p.dot(P) * P;
    const double un = u.norm();
    if (un < 1e-14) return p;
    u /= un;
    return (std::cos(mesh.domain.rho) * P + std::sin(mesh.domain.rho) * u).normalized();
  };

  // Edge midpoints; boundary edge midpoints land on the exact boundary curve.
  std::map<std::pair<int, int>, char> bnd_edges;
  for (const auto& e : mesh.edges)
    if (e.boundary()) bnd_edges[{e.a, e.b}] = 1;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    Vec3 p = (mesh.vertices[a] + mesh.vertices[b]).normalized();
    if (bnd_edges.count(key)) p = snap_boundary(p);
    int idx = out.vertex_count();
    out.vertices.push_back(p);
    mid.emplace(key, idx);
    return idx;
  };

  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]);
    const int bc = midpoint(t[1], t[2]);
    const int ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({t[1], bc, ab});
    out.triangles.push_back({t[2], ca, bc});
    out.triangles.push_back({ab, bc, ca});
  }
  out.finalize();
  if (out.domain.kind == DomainSpec::Kind::Cap) smooth_near_boundary(out, 2, 3);
  return out;
}

// ---------------------------------------------------------------------------
// Boundary distance
// ---------------------------------------------------------------------------

namespace {

// min over t in [0,1] of (1-t) da + t db + |C - (A + t (B - A))|.
double two_point_update(const Vec3& A, const Vec3& B, const Vec3& C, double da,
                        double db) {
  auto f = [&](double t) {
    return (1.0 - t) * da + t * db + (C - (A + t * (B - A))).norm();
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3;
    const double m2 = hi - (hi - lo) / 3;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

std::vector<double> boundary_distance_values(const SphericalMesh& mesh) {
  const int nv = mesh.vertex_count();
  if (mesh.boundary_vertices().empty())
    throw Error(ErrorCode::DomainViolation, "mesh has an empty boundary");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(nv, kInf);
  std::vector<char> settled(nv, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int b : mesh.boundary_vertices()) {
    d[b] = 0.0;
    heap.push({0.0, b});
  }

  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (settled[u] || du > d[u]) continue;
    settled[u] = 1;
    // Plain edge relaxation (guarantees the Lipschitz bound).
    for (int w : mesh.vertex_neighbors[u]) {
      if (settled[w]) continue;
      const double cand = d[u] + arc_length(mesh.vertices[u], mesh.vertices[w]);
      if (cand < d[w]) {
        d[w] = cand;
        heap.push({cand, w});
      }
    }
    // Two-point updates through triangles with a second settled vertex:
    // linear wavefront across the settled edge, straight segment to the apex.
    for (int ti : mesh.vertex_tris[u]) {
      const auto& t = mesh.triangles[ti];
      for (int k = 0; k < 3; ++k) {
        const int x = t[k];
        if (x == u || settled[x]) continue;
        const int o1 = t[(k + 1) % 3];
        const int o2 = t[(k + 2) % 3];
        const int w = (o1 == u) ? o2 : o1;
        if (!settled[w]) continue;
        const double cand = two_point_update(mesh.vertices[u], mesh.vertices[w],
                                             mesh.vertices[x], d[u], d[w]);
        if (cand < d[x]) {
          d[x] = cand;
          heap.push({cand, x});
        }
      }
    }
  }
  for (double v : d)
    if (!std::isfinite(v))
      throw Error(ErrorCode::DomainViolation, "mesh is not connected to its boundary");
  return d;
}

}  // namespace hypcmc
