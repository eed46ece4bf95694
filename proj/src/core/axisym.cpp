#include "core/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace hypcmc {

namespace {
constexpr double kPi = std::numbers::pi;

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth > 60 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2, depth + 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2, depth + 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  const double scale = std::max(std::abs(whole), 1e-30);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 0);
}

double sphere_measure(int n) { return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0); }

void AxisymProblem::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "weight exponent n must be >= 2");
  if (!(std::abs(H) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "mean curvature must satisfy |H| < 1");
  if (!(theta_max > 0.0 && theta_max < kPi / 2))
    throw Error(ErrorCode::InvalidArgument, "theta_max must lie in (0, pi/2)");
  if (grid_points < 64)
    throw Error(ErrorCode::InvalidArgument, "grid_points must be >= 64");
}

double AxisymProfile::value_at(double th) const {
  const int N = static_cast<int>(theta.size()) - 1;
  const double lo = theta.front(), hi = theta.back();
  const double t = std::clamp(th, lo, hi);
  int i = static_cast<int>((t - lo) / (hi - lo) * N);
  i = std::clamp(i, 0, N - 1);
  const double h = theta[i + 1] - theta[i];
  const double s = (t - theta[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * v[i] + h10 * h * dv[i] + h01 * v[i + 1] + h11 * h * dv[i + 1];
}

double AxisymProfile::deriv_at(double th) const {
  const int N = static_cast<int>(theta.size()) - 1;
  const double lo = theta.front(), hi = theta.back();
  const double t = std::clamp(th, lo, hi);
  int i = static_cast<int>((t - lo) / (hi - lo) * N);
  i = std::clamp(i, 0, N - 1);
  const double h = theta[i + 1] - theta[i];
  const double s = (t - theta[i]) / h;
  const double d00 = 6 * s * (s - 1) / h;
  const double d10 = (1 - s) * (1 - 3 * s);
  const double d01 = -6 * s * (s - 1) / h;
  const double d11 = s * (3 * s - 2);
  return d00 * v[i] + d10 * dv[i] + d01 * v[i + 1] + d11 * dv[i + 1];
}

std::string AxisymProfile::csv_string() const {
  std::ostringstream os;
  os << "theta,v,dv\n";
  char buf[128];
  for (size_t i = 0; i < theta.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", theta[i], v[i], dv[i]);
    os << buf;
  }
  return os.str();
}

AxisymProfile solve_axisym(const AxisymProblem& p) {
  p.validate();
  const int N = p.grid_points;
  const double dth = p.theta_max / N;
  auto s_of = [&](double th) {
    return std::pow(std::sin(th), p.n - 1) * std::pow(std::cos(th), -p.n);
  };
  auto rhs_of = [&](double th) {
    return p.n * p.H * std::pow(std::sin(th), p.n - 1) * std::pow(std::cos(th), -(p.n + 1));
  };

  // Precompute midpoint weights and per-cell source integrals.
  std::vector<double> s_mid(N);
  for (int i = 0; i < N; ++i) s_mid[i] = s_of((i + 0.5) * dth);
  std::vector<double> cell_rhs(N, 0.0);  // cell i owns node i
  // Node 0 cell [0, dth/2]; node i cell [(i-1/2) dth, (i+1/2) dth].
  cell_rhs[0] = adaptive_simpson(rhs_of, 0.0, 0.5 * dth, 1e-12);
  for (int i = 1; i < N; ++i)
    cell_rhs[i] = adaptive_simpson(rhs_of, (i - 0.5) * dth, (i + 0.5) * dth, 1e-12);

  std::vector<double> v(N + 1, p.boundary_value);
  auto flux = [&](int i, const std::vector<double>& vv) {
    // Flux across the face between nodes i and i+1.
    const double q = (vv[i + 1] - vv[i]) / dth;
    return s_mid[i] * q / std::sqrt(1.0 + q * q);
  };
  auto residual = [&](const std::vector<double>& vv, std::vector<double>& R) {
    R[0] = flux(0, vv) - cell_rhs[0];
    for (int i = 1; i < N; ++i) R[i] = flux(i, vv) - flux(i - 1, vv) - cell_rhs[i];
  };

  std::vector<double> R(N), dl(N), dd(N), du(N), delta(N);
  double prev_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    residual(v, R);
    double norm = 0;
    for (double r : R) norm = std::max(norm, std::abs(r));
    if (norm <= 1e-11) {
      converged = true;
      break;
    }
    // Tridiagonal Jacobian: dF/dq = s / W^3.
    auto dflux = [&](int i) {
      const double q = (v[i + 1] - v[i]) / dth;
      const double W2 = 1.0 + q * q;
      return s_mid[i] / (W2 * std::sqrt(W2) * dth);
    };
    for (int i = 0; i < N; ++i) {
      const double dfi = dflux(i);
      if (i == 0) {
        dd[0] = -dfi;
        du[0] = dfi;
        dl[0] = 0;
      } else {
        const double dfim = dflux(i - 1);
        dl[i] = dfim;
        dd[i] = -dfi - dfim;
        du[i] = (i + 1 <= N - 1) ? dfi : 0.0;  // v[N] fixed
      }
    }
    // Thomas algorithm for J delta = -R.
    std::vector<double> cp(N), dp(N);
    cp[0] = du[0] / dd[0];
    dp[0] = -R[0] / dd[0];
    for (int i = 1; i < N; ++i) {
      const double m = dd[i] - dl[i] * cp[i - 1];
      cp[i] = (i < N - 1) ? du[i] / m : 0.0;
      dp[i] = (-R[i] - dl[i] * dp[i - 1]) / m;
    }
    delta[N - 1] = dp[N - 1];
    for (int i = N - 2; i >= 0; --i) delta[i] = dp[i] - cp[i] * delta[i + 1];

    // Damped update: backtrack on the residual norm.
    double step = 1.0;
    std::vector<double> trial(N + 1);
    for (int ls = 0; ls < 40; ++ls) {
      for (int i = 0; i < N; ++i) trial[i] = v[i] + step * delta[i];
      trial[N] = p.boundary_value;
      residual(trial, R);
      double tn = 0;
      for (double r : R) tn = std::max(tn, std::abs(r));
      if (tn < norm || tn < 1e-11) break;
      step *= 0.5;
    }
    v = trial;
    if (it > 100 && norm >= prev_norm)
      throw Error(ErrorCode::SolverFailure, "axisymmetric Newton iteration stalled");
    prev_norm = norm;
  }
  if (!converged) {
    residual(v, R);
    double norm = 0;
    for (double r : R) norm = std::max(norm, std::abs(r));
    if (norm > 1e-10)
      throw Error(ErrorCode::SolverFailure, "axisymmetric Newton did not converge");
  }

  AxisymProfile prof;
  prof.theta.resize(N + 1);
  prof.v = v;
  prof.dv.resize(N + 1);
  for (int i = 0; i <= N; ++i) prof.theta[i] = i * dth;
  // Nodal derivatives from one-sided slopes averaged at interior nodes.
  prof.dv[0] = 0.0;  // pole regularity
  for (int i = 1; i < N; ++i) prof.dv[i] = (v[i + 1] - v[i - 1]) / (2 * dth);
  prof.dv[N] = (3 * v[N] - 4 * v[N - 1] + v[N - 2]) / (2 * dth);
  return prof;
}

std::vector<double> axisym_fluxes(const AxisymProblem& p, const AxisymProfile& prof) {
  const int N = static_cast<int>(prof.v.size()) - 1;
  const double dth = p.theta_max / N;
  std::vector<double> out(N);
  for (int i = 0; i < N; ++i) {
    const double q = (prof.v[i + 1] - prof.v[i]) / dth;
    const double th = (i + 0.5) * dth;
    out[i] = std::pow(std::sin(th), p.n - 1) * std::pow(std::cos(th), -p.n) * q /
             std::sqrt(1.0 + q * q);
  }
  return out;
}

EnergyBreakdown energy_1d(const AxisymProblem& p, const std::function<double(double)>& v,
                          const std::function<double(double)>& dv) {
  p.validate();
  const double w = sphere_measure(p.n);
  auto area_ig = [&](double th) {
    const double d = dv(th);
    return std::sqrt(1.0 + d * d) * std::pow(std::cos(th), -p.n) *
           std::pow(std::sin(th), p.n - 1);
  };
  auto vol_ig = [&](double th) {
    return v(th) * std::pow(std::cos(th), -(p.n + 1)) * std::pow(std::sin(th), p.n - 1);
  };
  EnergyBreakdown out;
  out.n = p.n;
  out.H = p.H;
  out.area = w * adaptive_simpson(area_ig, 0.0, p.theta_max, 1e-11);
  out.volume = w * adaptive_simpson(vol_ig, 0.0, p.theta_max, 1e-11);
  out.total = out.area + p.n * p.H * out.volume;
  return out;
}

EnergyBreakdown energy_1d(const AxisymProblem& p, const AxisymProfile& prof) {
  return energy_1d(
      p, [&](double th) { return prof.value_at(th); },
      [&](double th) { return prof.deriv_at(th); });
}

}  // namespace hypcmc
