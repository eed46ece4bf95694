#include "core/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hypcmc {

ProductGrid make_product_grid(const SphericalMesh& mesh, double T, double dw, int n) {
  if (!(T > 0) || !(dw > 0))
    throw Error(ErrorCode::InvalidArgument, "grid requires T > 0 and dw > 0");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "weight exponent n must be >= 2");
  const double m_unit = 1.0 / dw;
  const double L_exact = (2 * T + 2) / dw;
  const double Tm = T / dw;
  if (std::abs(m_unit - std::round(m_unit)) > 1e-9 ||
      std::abs(L_exact - std::round(L_exact)) > 1e-9 ||
      std::abs(Tm - std::round(Tm)) > 1e-9)
    throw Error(ErrorCode::InvalidArgument,
                "dw must divide 1, T and 2T+2 exactly (level grid alignment)");

  ProductGrid g;
  g.base = &mesh;
  g.T = T;
  g.dw = dw;
  g.n = n;
  g.columns = mesh.triangle_count();
  g.levels = static_cast<int>(std::llround(L_exact));
  g.band_lo = static_cast<int>(std::llround(m_unit));
  g.band_hi = g.levels - g.band_lo;

  g.w_horiz.resize(g.columns);
  g.w_vol.resize(g.columns);
  for (int c = 0; c < g.columns; ++c) {
    const double y = mesh.tri_y[c];
    g.w_horiz[c] = mesh.tri_area[c] * std::pow(y, -n);
    g.w_vol[c] = mesh.tri_area[c] * dw * std::pow(y, -(n + 1));
  }
  for (const auto& e : mesh.edges) {
    if (e.boundary()) continue;
    g.lateral.push_back({e.t0, e.t1, e.arc * dw * std::pow(e.y_mid, -n)});
  }
  return g;
}

bool in_admissible_class(const ProductGrid& g, const VoxelSet& E) {
  if (static_cast<int>(E.occ.size()) != g.columns) return false;
  for (const auto& col : E.occ) {
    if (static_cast<int>(col.size()) != g.levels) return false;
    for (int l = 0; l < g.band_lo; ++l)
      if (!col[l]) return false;
    for (int l = g.band_hi; l < g.levels; ++l)
      if (col[l]) return false;
  }
  return true;
}

void require_admissible(const ProductGrid& g, const VoxelSet& E) {
  if (!in_admissible_class(g, E))
    throw Error(ErrorCode::InvalidArgument,
                "voxel set violates the slab containment of the admissible class");
}

std::vector<double> column_values(const ProductGrid& g, const ScalarField& v) {
  v.check_on(*g.base);
  std::vector<double> out(g.columns);
  for (int c = 0; c < g.columns; ++c) {
    const auto& t = g.base->triangles[c];
    out[c] = (v[t[0]] + v[t[1]] + v[t[2]]) / 3.0;
  }
  return out;
}

double snap_to_grid(const ProductGrid& g, double v) {
  return std::llround(v / g.dw) * g.dw;
}

VoxelSet subgraph_set(const ProductGrid& g, const std::vector<double>& col_vals) {
  if (static_cast<int>(col_vals.size()) != g.columns)
    throw Error(ErrorCode::InvalidArgument, "column value count mismatch");
  VoxelSet E;
  E.occ.assign(g.columns, std::vector<char>(g.levels, 0));
  for (int c = 0; c < g.columns; ++c) {
    if (!(std::abs(col_vals[c]) < g.T))
      throw Error(ErrorCode::InvalidArgument,
                  "column value exceeds the grid height T");
    const long j = std::llround(col_vals[c] / g.dw);
    const long cut = j + static_cast<long>(std::llround((g.T + 1) / g.dw));
    for (int l = 0; l < g.levels; ++l) E.occ[c][l] = (l < cut) ? 1 : 0;
  }
  return E;
}

double perimeter(const ProductGrid& g, const VoxelSet& E) {
  require_admissible(g, E);
  double p = 0.0;
  for (int c = 0; c < g.columns; ++c) {
    int transitions = 0;
    for (int l = 0; l + 1 < g.levels; ++l)
      if (E.occ[c][l] != E.occ[c][l + 1]) ++transitions;
    p += g.w_horiz[c] * transitions;
  }
  for (const auto& e : g.lateral) {
    int diff = 0;
    for (int l = 0; l < g.levels; ++l)
      if (E.occ[e.c0][l] != E.occ[e.c1][l]) ++diff;
    p += e.w * diff;
  }
  return p;
}

double volume(const ProductGrid& g, const VoxelSet& E) {
  require_admissible(g, E);
  double vol = 0.0;
  for (int c = 0; c < g.columns; ++c) {
    int count = 0;
    for (int l = 0; l < g.levels; ++l) count += E.occ[c][l] ? 1 : 0;
    vol += g.w_vol[c] * count;
  }
  return vol;
}

double set_functional(const ProductGrid& g, const VoxelSet& E, double H) {
  return perimeter(g, E) + g.n * H * volume(g, E);
}

RearrangeResult rearrange(const ProductGrid& g, const VoxelSet& E) {
  require_admissible(g, E);
  RearrangeResult out;
  out.u.resize(g.columns);
  out.set.occ.assign(g.columns, std::vector<char>(g.levels, 0));
  for (int c = 0; c < g.columns; ++c) {
    int count = 0;
    for (int l = g.band_lo; l < g.band_hi; ++l) count += E.occ[c][l] ? 1 : 0;
    out.u[c] = count * g.dw - g.T;
    const int cut = g.band_lo + count;
    for (int l = 0; l < g.levels; ++l) out.set.occ[c][l] = (l < cut) ? 1 : 0;
  }
  return out;
}

SubmodularityResult submodularity_check(const ProductGrid& g, const VoxelSet& E1,
                                        const VoxelSet& E2) {
  require_admissible(g, E1);
  require_admissible(g, E2);
  VoxelSet un, in;
  un.occ.assign(g.columns, std::vector<char>(g.levels, 0));
  in.occ.assign(g.columns, std::vector<char>(g.levels, 0));
  for (int c = 0; c < g.columns; ++c)
    for (int l = 0; l < g.levels; ++l) {
      un.occ[c][l] = (E1.occ[c][l] || E2.occ[c][l]) ? 1 : 0;
      in.occ[c][l] = (E1.occ[c][l] && E2.occ[c][l]) ? 1 : 0;
    }
  SubmodularityResult res;
  res.slack = perimeter(g, E1) + perimeter(g, E2) - perimeter(g, un) - perimeter(g, in);
  res.holds = res.slack >= -1e-12;
  return res;
}

double crystalline_area(const ProductGrid& g, const std::vector<double>& col_vals) {
  double a = 0.0;
  for (int c = 0; c < g.columns; ++c) a += g.w_horiz[c];
  for (const auto& e : g.lateral)
    a += std::abs(col_vals[e.c0] - col_vals[e.c1]) * (e.w / g.dw);
  return a;
}

double volume_weight(const ProductGrid& g) {
  double k = 0.0;
  for (int c = 0; c < g.columns; ++c) k += g.w_vol[c] / g.dw;
  return k;
}

IdentityResult subgraph_energy_identity(const ProductGrid& g,
                                        const std::vector<double>& snapped_vals,
                                        double H) {
  for (double v : snapped_vals)
    if (std::abs(v - snap_to_grid(g, v)) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "column values are not grid-snapped");
  const VoxelSet E = subgraph_set(g, snapped_vals);
  IdentityResult res;
  res.lhs = set_functional(g, E, H);
  double vol_v = 0.0;
  for (int c = 0; c < g.columns; ++c) vol_v += (g.w_vol[c] / g.dw) * snapped_vals[c];
  res.rhs = crystalline_area(g, snapped_vals) + g.n * H * (vol_v + volume_weight(g) * (g.T + 1));
  res.gap_rel = std::abs(res.lhs - res.rhs) /
                std::max({std::abs(res.lhs), std::abs(res.rhs), 1.0});
  return res;
}

VoxelSet random_member(const ProductGrid& g, std::mt19937_64& rng) {
  VoxelSet E;
  E.occ.assign(g.columns, std::vector<char>(g.levels, 0));
  std::bernoulli_distribution bit(0.5);
  for (int c = 0; c < g.columns; ++c) {
    for (int l = 0; l < g.band_lo; ++l) E.occ[c][l] = 1;
    for (int l = g.band_lo; l < g.band_hi; ++l) E.occ[c][l] = bit(rng) ? 1 : 0;
  }
  return E;
}

std::string voxel_rle_string(const ProductGrid& g, const VoxelSet& E) {
  require_admissible(g, E);
  std::ostringstream os;
  for (int c = 0; c < g.columns; ++c) {
    os << c << ":";
    bool first = true;
    int l = 0;
    while (l < g.levels) {
      if (!E.occ[c][l]) {
        ++l;
        continue;
      }
      int r = l;
      while (r + 1 < g.levels && E.occ[c][r + 1]) ++r;
      os << (first ? " " : ",") << l << "-" << r;
      first = false;
      l = r + 1;
    }
    os << "\n";
  }
  return os.str();
}

VoxelSet voxel_from_rle(const ProductGrid& g, const std::string& text) {
  VoxelSet E;
  E.occ.assign(g.columns, std::vector<char>(g.levels, 0));
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::IoFailure, "malformed voxel line: " + line);
    const int c = std::stoi(line.substr(0, colon));
    if (c < 0 || c >= g.columns)
      throw Error(ErrorCode::IoFailure, "voxel column out of range");
    std::istringstream runs(line.substr(colon + 1));
    std::string run;
    while (std::getline(runs, run, ',')) {
      if (run.find_first_not_of(" \t") == std::string::npos) continue;
      const size_t dash = run.find('-');
      if (dash == std::string::npos)
        throw Error(ErrorCode::IoFailure, "malformed voxel run: " + run);
      const int s = std::stoi(run.substr(0, dash));
      const int e = std::stoi(run.substr(dash + 1));
      if (s < 0 || e >= g.levels || s > e)
        throw Error(ErrorCode::IoFailure, "voxel run out of range: " + run);
      for (int l = s; l <= e; ++l) E.occ[c][l] = 1;
    }
  }
  require_admissible(g, E);
  return E;
}

ExhaustiveResult exhaustive_minimize(const ProductGrid& g, const VoxelSet& lower,
                                     const VoxelSet& upper, double H) {
  require_admissible(g, lower);
  require_admissible(g, upper);
  if (g.levels > 62)
    throw Error(ErrorCode::InvalidArgument, "exhaustive search limited to <= 62 levels");

  // Bit-packed columns; bit l = occupancy of level l.
  std::vector<uint64_t> base(g.columns, 0), free_mask(g.columns, 0);
  std::vector<std::pair<int, int>> free_cells;  // (column, level)
  for (int c = 0; c < g.columns; ++c) {
    for (int l = 0; l < g.levels; ++l) {
      if (lower.occ[c][l] && !upper.occ[c][l])
        throw Error(ErrorCode::InvalidArgument, "lower bound not contained in upper");
      if (lower.occ[c][l]) base[c] |= (uint64_t(1) << l);
      if (!lower.occ[c][l] && upper.occ[c][l]) {
        free_mask[c] |= (uint64_t(1) << l);
        free_cells.emplace_back(c, l);
      }
    }
  }
  const int K = static_cast<int>(free_cells.size());
  if (K > 24)
    throw Error(ErrorCode::InvalidArgument, "exhaustive search limited to <= 24 free cells");

  const uint64_t vmask = (g.levels >= 2) ? ((uint64_t(1) << (g.levels - 1)) - 1) : 0;
  auto eval = [&](const std::vector<uint64_t>& cols) {
    double F = 0.0;
    for (int c = 0; c < g.columns; ++c) {
      const uint64_t x = cols[c];
      F += g.w_horiz[c] * __builtin_popcountll((x ^ (x >> 1)) & vmask);
      F += g.n * H * g.w_vol[c] * __builtin_popcountll(x);
    }
    for (const auto& e : g.lateral)
      F += e.w * __builtin_popcountll(cols[e.c0] ^ cols[e.c1]);
    return F;
  };

  ExhaustiveResult res;
  std::vector<uint64_t> cols = base;
  uint64_t best_mask = 0;
  res.min_value = eval(cols);
  res.tie_count = 0;
  const uint64_t total = uint64_t(1) << K;
  for (uint64_t mask = 1; mask < total; ++mask) {
    // Rebuild from scratch per mask (columns are few on toy grids).
    for (int c = 0; c < g.columns; ++c) cols[c] = base[c];
    for (int b = 0; b < K; ++b)
      if (mask & (uint64_t(1) << b))
        cols[free_cells[b].first] |= (uint64_t(1) << free_cells[b].second);
    const double F = eval(cols);
    if (F < res.min_value) {
      res.min_value = F;
      best_mask = mask;
      res.tie_count = 0;
    } else if (F == res.min_value) {
      ++res.tie_count;
    }
  }
  res.sets_scanned = static_cast<int64_t>(total);

  res.minimizer.occ.assign(g.columns, std::vector<char>(g.levels, 0));
  for (int c = 0; c < g.columns; ++c)
    for (int l = 0; l < g.levels; ++l) res.minimizer.occ[c][l] = lower.occ[c][l];
  for (int b = 0; b < K; ++b)
    if (best_mask & (uint64_t(1) << b))
      res.minimizer.occ[free_cells[b].first][free_cells[b].second] = 1;

  // A subgraph attains the same minimum iff rearranging the winner keeps F.
  const RearrangeResult rr = rearrange(g, res.minimizer);
  const double f_sub = set_functional(g, rr.set, H);
  res.subgraph_among_minimizers =
      f_sub <= res.min_value + 1e-12 * std::max(1.0, std::abs(res.min_value));
  return res;
}

}  // namespace hypcmc
