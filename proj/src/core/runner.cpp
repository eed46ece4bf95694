#include "core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "core/axisym.hpp"
#include "core/barriers.hpp"
#include "core/energy.hpp"
#include "core/geometry.hpp"
#include "core/rearrangement.hpp"
#include "core/solver.hpp"
#include "core/sphere_mesh.hpp"

namespace hypcmc {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  f << content;
}

class Config {
 public:
  explicit Config(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& dflt) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }
  std::string require(const std::string& key) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end())
      throw Error(ErrorCode::InvalidArgument, "missing required key '" + key + "'");
    return it->second;
  }
  double num(const std::string& key, double dflt) {
    const std::string s = str(key, fmt(dflt));
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "key '" + key + "': bad number '" + s + "'");
    }
  }
  int integer(const std::string& key, int dflt) {
    const double v = num(key, dflt);
    if (v != std::floor(v))
      throw Error(ErrorCode::InvalidArgument, "key '" + key + "' must be an integer");
    return static_cast<int>(v);
  }

  std::vector<std::string> unknown_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

DomainSpec parse_domain(const std::string& text, int level) {
  const auto parts = split(text, ':');
  if (parts[0] == "cap" && parts.size() == 2)
    return DomainSpec::cap(std::stod(parts[1]), level);
  if (parts[0] == "ball" && (parts.size() == 2 || parts.size() == 3)) {
    Vec3 center(0, 0, 1);
    if (parts.size() == 3) {
      const auto c = split(parts[2], ',');
      if (c.size() != 3)
        throw Error(ErrorCode::InvalidArgument, "ball center needs three coordinates");
      center = Vec3(std::stod(c[0]), std::stod(c[1]), std::stod(c[2]));
    }
    return DomainSpec::geodesic_ball(center, std::stod(parts[1]), level);
  }
  throw Error(ErrorCode::InvalidArgument,
              "domain must be cap:EPS or ball:RHO[:cx,cy,cz], got '" + text + "'");
}

// Boundary/ambient data: constant:C, exact-trace[:C] or samples:PATH.
ScalarField parse_data(const std::string& text, const SphericalMesh& mesh, double H) {
  const auto parts = split(text, ':');
  if (parts[0] == "constant" && parts.size() == 2) {
    return ScalarField(mesh.vertex_count(), std::stod(parts[1]), "data");
  }
  if (parts[0] == "exact-trace" && parts.size() <= 2) {
    const double c = parts.size() == 2 ? std::stod(parts[1]) : 0.0;
    return exact_solution_eval(ExactEquidistantSolution(H, c), mesh);
  }
  if (parts[0] == "samples" && parts.size() == 2) {
    std::ifstream f(parts[1]);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot read samples file " + parts[1]);
    ScalarField phi(mesh.vertex_count(), 0.0, "data");
    std::vector<char> seen(mesh.vertex_count(), 0);
    int id;
    double val;
    while (f >> id >> val) {
      if (id < 0 || id >= mesh.vertex_count())
        throw Error(ErrorCode::IoFailure, "sample vertex id out of range");
      phi[id] = val;
      seen[id] = 1;
    }
    for (int b : mesh.boundary_vertices())
      if (!seen[b])
        throw Error(ErrorCode::IoFailure, "samples file misses boundary vertex " +
                                              std::to_string(b));
    return phi;
  }
  throw Error(ErrorCode::InvalidArgument,
              "data must be constant:C, exact-trace[:C] or samples:PATH");
}

SolveOptions parse_solver_options(Config& cfg) {
  SolveOptions opts;
  opts.grad_tol = cfg.num("grad_tol", opts.grad_tol);
  opts.max_newton = cfg.integer("max_newton", opts.max_newton);
  const std::string mode = cfg.str("mode", "strong");
  if (mode == "strong")
    opts.mode = SolveOptions::Mode::StrongDirichlet;
  else if (mode == "penalty")
    opts.mode = SolveOptions::Mode::Penalty;
  else
    throw Error(ErrorCode::InvalidArgument, "mode must be strong or penalty");
  opts.validate();
  return opts;
}

std::string meridian_csv(const SphericalMesh& mesh, const ScalarField& v) {
  const double band = std::max(mesh.max_edge_arc(), 1e-3);
  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const double az = std::atan2(mesh.vertices[i].y(), mesh.vertices[i].x());
    if (std::abs(az) <= band) rows.push_back({std::acos(std::clamp(mesh.y(i), -1.0, 1.0)), i});
  }
  std::sort(rows.begin(), rows.end());
  std::ostringstream os;
  os << "theta,v\n";
  for (const auto& [th, i] : rows) os << fmt(th) << "," << fmt(v[i]) << "\n";
  return os.str();
}

std::string solution_csv(const SphericalMesh& mesh, const ScalarField& v) {
  const ScalarField W = slope_field(mesh, v);
  const ScalarField Hc = hyperbolic_mean_curvature(mesh, v);
  std::ostringstream os;
  os << "vertex_id,x,y,z,v,W,H_estimate\n";
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    os << i << "," << fmt(mesh.vertices[i].x()) << "," << fmt(mesh.vertices[i].y())
       << "," << fmt(mesh.vertices[i].z()) << "," << fmt(v[i]) << "," << fmt(W[i])
       << "," << fmt(Hc[i]) << "\n";
  }
  return os.str();
}

double linf_vs_exact(const SphericalMesh& mesh, const ScalarField& v,
                     const ExactEquidistantSolution& sol) {
  double e = 0;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    e = std::max(e, std::abs(v[i] - sol.profile(mesh.y(i))));
  return e;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

RunOutcome cmd_mesh(Config& cfg) {
  const int level = cfg.integer("level", 3);
  const DomainSpec dom = parse_domain(cfg.require("domain"), level);
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  const SphericalMesh mesh = build_mesh(dom);
  mesh.export_text((out / "mesh.txt").string());
  double blen = 0;
  for (const auto& e : mesh.edges)
    if (e.boundary()) blen += e.arc;
  std::ostringstream rep;
  rep << "command=mesh\n";
  rep << "n_vertices=" << mesh.vertex_count() << "\n";
  rep << "n_triangles=" << mesh.triangle_count() << "\n";
  rep << "total_area=" << fmt(mesh.total_area()) << "\n";
  rep << "boundary_length=" << fmt(blen) << "\n";
  rep << "max_edge_arc=" << fmt(mesh.max_edge_arc()) << "\n";
  write_file(out / "report.txt", rep.str());
  return {0, "mesh written to " + (out / "mesh.txt").string()};
}

RunOutcome cmd_solve(Config& cfg) {
  const int level = cfg.integer("level", 4);
  const DomainSpec dom = parse_domain(cfg.require("domain"), level);
  const double H = cfg.num("H", 0.0);
  const std::string data_spec = cfg.str("data", "constant:0");
  const SolveOptions opts = parse_solver_options(cfg);
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  const SphericalMesh mesh = build_mesh(dom);
  const ScalarField phi = parse_data(data_spec, mesh, H);
  const SolveReport rep = solve_dirichlet(mesh, phi, H, opts);

  mesh.export_text((out / "mesh.txt").string());
  write_file(out / "solution.csv", solution_csv(mesh, rep.v));
  write_file(out / "meridian.csv", meridian_csv(mesh, rep.v));

  std::ostringstream os;
  os << "command=solve\n";
  os << "domain=" << cfg.str("domain", "") << "\n";
  os << "level=" << level << "\n";
  os << "n_vertices=" << mesh.vertex_count() << "\n";
  os << rep.to_record();
  const int pole = mesh.nearest_vertex(Vec3(0, 0, 1));
  os << "W_center=" << fmt(slope_field(mesh, rep.v)[pole]) << "\n";
  if (split(data_spec, ':')[0] == "exact-trace") {
    const double c = split(data_spec, ':').size() == 2
                         ? std::stod(split(data_spec, ':')[1])
                         : 0.0;
    os << "linf_error=" << fmt(linf_vs_exact(mesh, rep.v, ExactEquidistantSolution(H, c)))
       << "\n";
  }
  write_file(out / "report.txt", os.str());
  return {0, "solve finished in " + std::to_string(rep.iterations) + " Newton steps"};
}

RunOutcome cmd_verify_exact(Config& cfg) {
  const int level = cfg.integer("level", 5);
  const DomainSpec dom = parse_domain(cfg.str("domain", "cap:0.5"), level);
  const double H = cfg.num("H", 0.0);
  const double c = cfg.num("c", 0.0);
  const double tol = cfg.num("curv_tol", 1e-2);
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  const SphericalMesh mesh = build_mesh(dom);
  const ScalarField v = exact_solution_eval(ExactEquidistantSolution(H, c), mesh);
  const ScalarField Hc = hyperbolic_mean_curvature(mesh, v);
  double worst = 0;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (!mesh.is_boundary(i)) worst = std::max(worst, std::abs(Hc[i] - H));
  export_field_csv(mesh, Hc, (out / "curvature.csv").string());

  std::ostringstream os;
  os << "command=verify-exact\n";
  os << "H=" << fmt(H) << "\n";
  os << "level=" << level << "\n";
  os << "max_interior_curvature_error=" << fmt(worst) << "\n";
  os << "tolerance=" << fmt(tol) << "\n";
  os << "pass=" << (worst <= tol ? 1 : 0) << "\n";
  write_file(out / "report.txt", os.str());
  if (worst > tol)
    return {1, "curvature error " + fmt(worst) + " exceeds " + fmt(tol)};
  return {0, "curvature error " + fmt(worst)};
}

RunOutcome cmd_barrier_check(Config& cfg) {
  const int level = cfg.integer("level", 4);
  const DomainSpec dom = parse_domain(cfg.str("domain", "cap:0.6"), level);
  const double H = cfg.num("H", 0.0);
  const std::string data_spec = cfg.str("data", "exact-trace");
  const double margin_required = cfg.num("margin_required", 0.05);
  const SolveOptions opts = parse_solver_options(cfg);
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  const SphericalMesh mesh = build_mesh(dom);
  const ScalarField phi = parse_data(data_spec, mesh, H);

  const ConeCurvatureReport cone = cone_mean_curvature(mesh, H);
  write_file(out / "cone_report.csv", cone.csv_string());

  std::ostringstream os;
  os << "command=barrier-check\n";
  os << "H=" << fmt(H) << "\n";
  os << "cone_margin=" << fmt(cone.margin) << "\n";
  bool ok = cone.margin > 0;

  if (ok) {
    const BarrierPair pair = boundary_barriers(mesh, phi, H, margin_required);
    os << "K=" << fmt(pair.K) << "\n";
    os << "delta=" << fmt(pair.delta) << "\n";
    os << "M=" << fmt(pair.M) << "\n";
    os << "accepted=" << (pair.accepted ? 1 : 0) << "\n";
    os << "upper_residual=" << fmt(pair.upper_residual) << "\n";
    os << "lower_residual=" << fmt(pair.lower_residual) << "\n";
    ok = ok && pair.accepted;

    const SolveReport rep = solve_dirichlet(mesh, phi, H, opts);
    double above = 0, below = 0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      above = std::max(above, rep.v[i] - pair.upper[i]);
      below = std::max(below, pair.lower[i] - rep.v[i]);
    }
    os << "sandwich_violation_upper=" << fmt(above) << "\n";
    os << "sandwich_violation_lower=" << fmt(below) << "\n";
    ok = ok && above <= 1e-6 && below <= 1e-6;
  }
  os << "pass=" << (ok ? 1 : 0) << "\n";
  write_file(out / "report.txt", os.str());
  return {ok ? 0 : 1, ok ? "barrier checks passed" : "barrier checks FAILED"};
}

RunOutcome cmd_rearrange(Config& cfg) {
  const int level = cfg.integer("level", 1);
  const DomainSpec dom = parse_domain(cfg.str("domain", "ball:0.5"), level);
  const double H = cfg.num("H", 0.0);
  const double T = cfg.num("T", 1.0);
  const double dw = cfg.num("dw", 0.25);
  const int n = cfg.integer("n", 2);
  const int trials = cfg.integer("trials", 500);
  const unsigned seed = static_cast<unsigned>(cfg.integer("seed", 0));
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  const SphericalMesh mesh = build_mesh(dom);
  const ProductGrid grid = make_product_grid(mesh, T, dw, n);
  std::mt19937_64 rng(seed);

  int vol_fail = 0, mono_fail = 0, submod_fail = 0, ident_fail = 0;
  double worst_gap = 0;
  for (int t = 0; t < trials; ++t) {
    const VoxelSet E = random_member(grid, rng);
    const RearrangeResult rr = rearrange(grid, E);
    if (volume(grid, rr.set) != volume(grid, E)) ++vol_fail;
    if (!(set_functional(grid, rr.set, H) <= set_functional(grid, E, H))) ++mono_fail;

    const VoxelSet E2 = random_member(grid, rng);
    const SubmodularityResult sm = submodularity_check(grid, E, E2);
    if (!(sm.slack >= 0)) ++submod_fail;

    std::vector<double> vals(grid.columns);
    std::uniform_int_distribution<int> lev(-(grid.band_lo - 1), grid.band_lo - 1);
    for (auto& v : vals) v = lev(rng) * grid.dw;
    const IdentityResult id = subgraph_energy_identity(grid, vals, H);
    worst_gap = std::max(worst_gap, id.gap_rel);
    if (id.gap_rel > 1e-12) ++ident_fail;
  }

  // Sample export for the last random set.
  const VoxelSet sample = random_member(grid, rng);
  write_file(out / "sample.rle", voxel_rle_string(grid, sample));

  std::ostringstream os;
  os << "command=rearrange\n";
  os << "columns=" << grid.columns << "\n";
  os << "levels=" << grid.levels << "\n";
  os << "trials=" << trials << "\n";
  os << "volume_preservation_failures=" << vol_fail << "\n";
  os << "monotonicity_failures=" << mono_fail << "\n";
  os << "submodularity_failures=" << submod_fail << "\n";
  os << "identity_failures=" << ident_fail << "\n";
  os << "worst_identity_gap=" << fmt(worst_gap) << "\n";
  const bool ok = vol_fail + mono_fail + submod_fail + ident_fail == 0;
  os << "pass=" << (ok ? 1 : 0) << "\n";
  write_file(out / "report.txt", os.str());
  return {ok ? 0 : 1, ok ? "rearrangement battery passed" : "rearrangement battery FAILED"};
}

RunOutcome cmd_asymptotic(Config& cfg) {
  const int level = cfg.integer("level", 4);
  const double H = cfg.num("H", 0.5);
  const std::string sched_text = cfg.str("eps_schedule", "0.4,0.2,0.1,0.05");
  const std::string equator = cfg.str("equator", "constant:0");
  const SolveOptions opts = parse_solver_options(cfg);
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  std::vector<double> schedule;
  for (const auto& s : split(sched_text, ',')) schedule.push_back(std::stod(s));

  const auto eq_parts = split(equator, ':');
  if (eq_parts[0] != "constant" || eq_parts.size() != 2)
    throw Error(ErrorCode::InvalidArgument, "equator must be constant:C");
  const double c_eq = std::stod(eq_parts[1]);
  const AsymptoticResult res = solve_asymptotic(
      [c_eq](double) { return c_eq; }, H, schedule, level, opts);
  write_file(out / "asymptotic.csv", res.table_csv());

  // Constant equator data has the closed-form limit profile; report the
  // final sup-distance to it on the first compact.
  const ExactEquidistantSolution limit(
      H, c_eq - ExactEquidistantSolution(H, 0).profile(0.0));
  double err = 0;
  const SphericalMesh& last = res.meshes.back();
  const ScalarField& v_last = res.solutions.back();
  for (int i = 0; i < last.vertex_count(); ++i)
    if (last.y(i) >= schedule.front() - 1e-12)
      err = std::max(err, std::abs(v_last[i] - limit.profile(last.y(i))));

  std::ostringstream os;
  os << "command=asymptotic\n";
  os << "H=" << fmt(H) << "\n";
  for (size_t i = 0; i + 1 < schedule.size(); ++i)
    os << "sup_diff_" << i << "=" << fmt(res.sup_diff[i]) << "\n";
  os << "limit_error_on_compact=" << fmt(err) << "\n";
  write_file(out / "report.txt", os.str());
  return {0, "asymptotic schedule finished"};
}

RunOutcome cmd_oracle(Config& cfg) {
  AxisymProblem p;
  p.n = cfg.integer("n", 2);
  p.H = cfg.num("H", 0.0);
  p.theta_max = cfg.num("theta_max", 1.0);
  p.boundary_value = cfg.num("bc", 0.0);
  p.grid_points = cfg.integer("grid_points", 2048);
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  const AxisymProfile prof = solve_axisym(p);
  write_file(out / "profile.csv", prof.csv_string());
  const auto fluxes = axisym_fluxes(p, prof);
  double fmin = fluxes.front(), fmax = fluxes.front();
  for (double f : fluxes) {
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  const EnergyBreakdown e = energy_1d(p, prof);
  std::ostringstream os;
  os << "command=oracle\n";
  os << "n=" << p.n << "\n";
  os << "H=" << fmt(p.H) << "\n";
  os << "theta_max=" << fmt(p.theta_max) << "\n";
  os << "flux_min=" << fmt(fmin) << "\n";
  os << "flux_max=" << fmt(fmax) << "\n";
  os << e.to_record();
  write_file(out / "report.txt", os.str());
  return {0, "oracle profile written"};
}

RunOutcome cmd_convergence(Config& cfg) {
  const std::string dom_text = cfg.str("domain", "cap:0.3");
  const double H = cfg.num("H", 0.5);
  const std::string levels_text = cfg.str("levels", "3..5");
  const double c = cfg.num("c", 0.0);
  const SolveOptions opts = parse_solver_options(cfg);
  const fs::path out = cfg.str("out", ".");
  const auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) throw Error(ErrorCode::InvalidArgument, "unknown keys");
  fs::create_directories(out);

  const auto lv = split(levels_text, '.');
  if (lv.size() != 3 || !lv[1].empty())
    throw Error(ErrorCode::InvalidArgument, "levels must look like 3..6");
  const int lo = std::stoi(lv[0]);
  const int hi = std::stoi(lv[2]);
  if (lo > hi || lo < 0)
    throw Error(ErrorCode::InvalidArgument, "bad level range");

  const ExactEquidistantSolution sol(H, c);
  std::ostringstream csv;
  csv << "level,n_vertices,linf_error,ratio\n";
  double prev = 0;
  double final_err = 0;
  for (int level = lo; level <= hi; ++level) {
    const SphericalMesh mesh = build_mesh(parse_domain(dom_text, level));
    const ScalarField phi = exact_solution_eval(sol, mesh);
    const SolveReport rep = solve_dirichlet(mesh, phi, H, opts);
    const double err = linf_vs_exact(mesh, rep.v, sol);
    csv << level << "," << mesh.vertex_count() << "," << fmt(err) << ",";
    if (level > lo) csv << fmt(prev / err);
    csv << "\n";
    prev = err;
    final_err = err;
  }
  write_file(out / "convergence.csv", csv.str());
  std::ostringstream os;
  os << "command=convergence\n";
  os << "H=" << fmt(H) << "\n";
  os << "final_linf_error=" << fmt(final_err) << "\n";
  write_file(out / "report.txt", os.str());
  return {0, "convergence table written"};
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "config line lacks '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

RunOutcome run_config(const std::map<std::string, std::string>& cfg_map) {
  Config cfg(cfg_map);
  try {
    const std::string command = cfg.require("command");
    RunOutcome out;
    if (command == "mesh")
      out = cmd_mesh(cfg);
    else if (command == "solve")
      out = cmd_solve(cfg);
    else if (command == "verify-exact")
      out = cmd_verify_exact(cfg);
    else if (command == "barrier-check")
      out = cmd_barrier_check(cfg);
    else if (command == "rearrange")
      out = cmd_rearrange(cfg);
    else if (command == "asymptotic")
      out = cmd_asymptotic(cfg);
    else if (command == "oracle")
      out = cmd_oracle(cfg);
    else if (command == "convergence")
      out = cmd_convergence(cfg);
    else
      return {2, "unknown command '" + command + "'"};
    return out;
  } catch (const Error& err) {
    // Configuration problems are usage errors; anything else that the checks
    // themselves raise counts as a failed run.
    if (err.code() == ErrorCode::InvalidArgument) {
      std::string msg = err.what();
      const auto unknown = cfg.unknown_keys();
      if (msg == "unknown keys") {
        msg = "unknown configuration keys:";
        for (const auto& k : unknown) msg += " " + k;
      }
      return {2, msg};
    }
    return {1, err.what()};
  }
}

RunOutcome run_config_text(const std::string& text) {
  try {
    return run_config(parse_config_text(text));
  } catch (const Error& err) {
    return {2, err.what()};
  }
}

}  // namespace hypcmc
