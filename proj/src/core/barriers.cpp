#include "core/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hypcmc {

namespace {

double equidistant_profile(double H, double y) {
  return std::log(std::sqrt(H * H * y * y + 1.0 - H * H) - H * y);
}

struct BoundaryFrame {
  int vertex = -1;
  Vec3 inward;         // inward unit normal in the tangent plane
  double turning = 0;  // signed turning angle of the loop (left = positive)
  double arc_avg = 0;  // mean of the two incident boundary arcs
};

std::vector<BoundaryFrame> boundary_frames(const SphericalMesh& mesh) {
  std::vector<BoundaryFrame> out;
  for (const auto& loop : mesh.boundary_loops) {
    const int m = static_cast<int>(loop.size());
    if (m < 3)
      throw Error(ErrorCode::DomainViolation, "degenerate boundary loop (< 3 vertices)");
    for (int i = 0; i < m; ++i) {
      const Vec3& b = mesh.vertices[loop[i]];
      const Vec3& p = mesh.vertices[loop[(i - 1 + m) % m]];
      const Vec3& q = mesh.vertices[loop[(i + 1) % m]];
      Vec3 toward_p = p - p.dot(b) * b;
      Vec3 toward_q = q - q.dot(b) * b;
      const Vec3 arr = (-toward_p).normalized();  // direction of travel p -> b
      const Vec3 dep = toward_q.normalized();     // direction of travel b -> q
      BoundaryFrame f;
      f.vertex = loop[i];
      f.turning = std::atan2(arr.cross(dep).dot(b), arr.dot(dep));
      f.arc_avg = 0.5 * (arc_length(p, b) + arc_length(b, q));
      Vec3 t = arr + dep;
      if (t.norm() < 1e-12) t = dep;
      // Domain on the left of the traversal: inward normal = z x tangent.
      f.inward = b.cross(t.normalized()).normalized();
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace

std::pair<ScalarField, ScalarField> global_barriers(double H, double M_bound,
                                                    const SphericalMesh& mesh) {
  if (!(std::abs(H) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");
  if (M_bound < 0)
    throw Error(ErrorCode::InvalidArgument, "data bound must be nonnegative");

  // g(y) = log(sqrt(H^2 y^2 + 1 - H^2) - H y) is monotone in y with extreme
  // values g(1) = log(1-H) and g(0) = log(sqrt(1-H^2)); the pair is shifted
  // so that lower <= -M and upper >= M hold over the whole hemisphere.
  const double g1 = std::log(1.0 - H);
  const double g0 = 0.5 * std::log(1.0 - H * H);
  const double shift_lo = (H >= 0) ? 0.0 : g1;   // sup of g
  const double shift_up = (H >= 0) ? g1 : g0;    // inf of g

  ScalarField lower(mesh.vertex_count(), 0.0, "barrier_lower");
  ScalarField upper(mesh.vertex_count(), 0.0, "barrier_upper");
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const double g = equidistant_profile(H, mesh.y(i));
    lower[i] = -M_bound + g - shift_lo;
    upper[i] = M_bound + g - shift_up;
  }
  return {lower, upper};
}

std::string ConeCurvatureReport::csv_string() const {
  std::ostringstream os;
  os << "vertex_id,h,margin\n";
  char buf[96];
  for (size_t i = 0; i < vertex_ids.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", vertex_ids[i], h[i], margin);
    os << buf;
  }
  return os.str();
}

ConeCurvatureReport cone_mean_curvature(const SphericalMesh& mesh, double H) {
  if (mesh.boundary_vertices().empty())
    throw Error(ErrorCode::DomainViolation, "mesh has an empty boundary");
  const int n = 2;
  ConeCurvatureReport rep;
  for (const auto& f : boundary_frames(mesh)) {
    const double kappa = f.turning / f.arc_avg;
    const double y = mesh.y(f.vertex);
    rep.vertex_ids.push_back(f.vertex);
    rep.boundary_H.push_back(kappa);
    rep.e_dot_N.push_back(f.inward.z());
    rep.h.push_back(y * (double(n - 1) / n) * kappa + f.inward.z());
  }
  double hmin = rep.h.front();
  for (double v : rep.h) hmin = std::min(hmin, v);
  rep.margin = hmin - std::abs(H);
  return rep;
}

SharpenedCondition sharpened_condition(const SphericalMesh& mesh, double H) {
  const int n = 2;
  SharpenedCondition out;
  for (const auto& f : boundary_frames(mesh)) {
    const double y = mesh.y(f.vertex);
    const double kappa = f.turning / f.arc_avg;
    const double thr =
        -(n / 2.0) * (-std::abs(H) + std::sqrt(H * H + 4.0 * y * y / (n * (n - 1.0))));
    out.vertex_ids.push_back(f.vertex);
    out.threshold.push_back(thr);
    out.satisfied.push_back(kappa > thr ? 1 : 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BarrierProfile: psi(t) = log(1 + beta t) / K, beta = K^2 e^{MK},
// delta = K^{-2}. log(1 + beta t) is evaluated through
// L = log(beta t) = log_beta + log t, as log1p(exp(L)) with the large-L
// branch L + log1p(exp(-L)), so huge M K never overflows.
// ---------------------------------------------------------------------------

namespace {
double log1p_exp(double L) {
  if (L > 36.0) return L + std::log1p(std::exp(-L));
  return std::log1p(std::exp(L));
}
}  // namespace

double BarrierProfile::psi(double t) const {
  if (t <= 0) return 0.0;
  return log1p_exp(log_beta() + std::log(t)) / K;
}

double BarrierProfile::psi_prime(double t) const {
  // beta / (K (1 + beta t)) = 1 / (K (t + 1/beta)).
  const double inv_beta = std::exp(-log_beta());
  return 1.0 / (K * (t + inv_beta));
}

double BarrierProfile::psi_second(double t) const {
  const double p = psi_prime(t);
  return -K * p * p;
}

double BarrierProfile::psi_at_delta() const { return log1p_exp(M * K) / K; }

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

double verifier_tolerance(const SphericalMesh& mesh, int n) {
  double y_min = 1.0, arc_sum = 0.0;
  for (int i = 0; i < mesh.vertex_count(); ++i) y_min = std::min(y_min, mesh.y(i));
  for (const auto& e : mesh.edges) arc_sum += e.arc;
  const double h_mean = arc_sum / mesh.edges.size();
  return 1e-3 * (n / y_min) * (h_mean / 0.01);
}

double verify_supersolution(const SphericalMesh& mesh, const ScalarField& field,
                            double H, double region) {
  field.check_on(mesh);
  const std::vector<double> d = boundary_distance_values(mesh);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.is_boundary(i) || d[i] >= region) continue;
    worst = std::max(worst, operator_residual_at(mesh, field.values, i, 2, H));
  }
  return worst;
}

double barrier_operator_extremum(const SphericalMesh& mesh, const BarrierPair& pair,
                                 bool upper, double H) {
  const int n = 2;
  BarrierProfile prof;
  prof.K = pair.K;
  prof.M = pair.M;
  const double delta = pair.delta;
  const double sgn = upper ? 1.0 : -1.0;

  double extremum = upper ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
  int sampled = 0;
  for (const auto& f : boundary_frames(mesh)) {
    QuadraticFit fit_d, fit_phi;
    try {
      fit_d = fit_quadratic(mesh, pair.distance.values, f.vertex);
      fit_phi = fit_quadratic(mesh, pair.phi.values, f.vertex);
    } catch (const Error&) {
      continue;  // isolated sliver without enough neighbors
    }
    Eigen::Vector2d nd = fit_d.grad;
    if (nd.norm() < 0.5) continue;  // unusable distance gradient
    nd.normalize();
    const Vec3& b = mesh.vertices[f.vertex];
    const Vec3 n3 = nd.x() * fit_d.t1 + nd.y() * fit_d.t2;

    for (double frac : {0.25, 0.5, 0.75}) {
      const double t = frac * delta;
      const Vec3 zt = (std::cos(t) * b + std::sin(t) * n3).normalized();
      const double y = zt.z();
      if (!(y > 0)) continue;
      // Second-order expansions of the smooth ingredients about b.
      const double tau = t * fit_d.grad.dot(nd) + 0.5 * t * t * nd.dot(fit_d.hess * nd);
      if (!(tau > 0)) continue;
      const Eigen::Vector2d grad_d = fit_d.grad + t * (fit_d.hess * nd);
      const Eigen::Vector2d grad_phi = fit_phi.grad + t * (fit_phi.hess * nd);
      const double pp = prof.psi_prime(tau);
      const double ps = prof.psi_second(tau);

      const Eigen::Vector2d G = grad_phi + sgn * pp * grad_d;
      const Eigen::Matrix2d Hm = fit_phi.hess +
                                 sgn * (ps * grad_d * grad_d.transpose() + pp * fit_d.hess);
      const double W2 = 1.0 + G.squaredNorm();
      const double W = std::sqrt(W2);
      const Eigen::Matrix2d a =
          Eigen::Matrix2d::Identity() - (G * G.transpose()) / W2;
      const Vec3 e_tan = Vec3(0, 0, 1) - y * zt;
      const Eigen::Vector2d e2(e_tan.dot(fit_d.t1), e_tan.dot(fit_d.t2));
      const double resid =
          (a * Hm).trace() / W - (double(n) / y) * e2.dot(G) / W - n * H / y;
      extremum = upper ? std::max(extremum, resid) : std::min(extremum, resid);
      ++sampled;
    }
  }
  if (sampled == 0)
    throw Error(ErrorCode::SolverFailure, "no usable barrier verification samples");
  return extremum;
}

BarrierPair boundary_barriers(const SphericalMesh& mesh, const ScalarField& phi,
                              double H, double margin_required) {
  phi.check_on(mesh);
  if (!(std::abs(H) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");
  if (!(margin_required > 0))
    throw Error(ErrorCode::InvalidArgument, "margin_required must be positive");
  const ConeCurvatureReport cone = cone_mean_curvature(mesh, H);
  if (cone.margin < margin_required)
    throw Error(ErrorCode::DomainViolation,
                "cone solvability margin below the required threshold");

  BarrierPair pair;
  pair.distance = boundary_distance(mesh);
  pair.phi = phi;
  pair.M = 2.0 * phi.max_abs();

  double sup_bnd = -std::numeric_limits<double>::infinity();
  double inf_bnd = std::numeric_limits<double>::infinity();
  for (int b : mesh.boundary_vertices()) {
    sup_bnd = std::max(sup_bnd, phi[b]);
    inf_bnd = std::min(inf_bnd, phi[b]);
  }

  const double tol = verifier_tolerance(mesh, 2);
  for (double K = 16.0; K <= double(1 << 20); K *= 2.0) {
    pair.K = K;
    pair.delta = 1.0 / (K * K);
    BarrierProfile prof;
    prof.K = K;
    prof.M = pair.M;
    pair.beta = K * K * std::exp(pair.M * K);  // may overflow to inf; report only
    const double cap = prof.psi_at_delta();

    pair.upper = ScalarField(mesh.vertex_count(), 0.0, "barrier_upper");
    pair.lower = ScalarField(mesh.vertex_count(), 0.0, "barrier_lower");
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      const double d = pair.distance[i];
      if (d < pair.delta) {
        pair.upper[i] = phi[i] + prof.psi(d);
        pair.lower[i] = phi[i] - prof.psi(d);
      } else {
        pair.upper[i] = sup_bnd + cap;
        pair.lower[i] = inf_bnd - cap;
      }
    }
    pair.upper_residual = barrier_operator_extremum(mesh, pair, true, H);
    pair.lower_residual = barrier_operator_extremum(mesh, pair, false, H);
    if (pair.upper_residual <= tol && pair.lower_residual >= -tol) {
      pair.accepted = true;
      return pair;
    }
  }
  pair.accepted = false;  // K cap exceeded; caller must not treat as success
  return pair;
}

}  // namespace hypcmc
