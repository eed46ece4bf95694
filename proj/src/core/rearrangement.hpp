#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/fields.hpp"
#include "core/sphere_mesh.hpp"

namespace hypcmc {

// ---------------------------------------------------------------------------
// Discrete product grid over the radial cone: columns are the base mesh
// triangles, levels are a uniform grid in the radial log-coordinate w on
// [-T-1, T+1]. Sets live in the class of measurable subsets squeezed between
// the mandatory bottom slab (w < -T) and the forbidden top slab (w > T).
// The perimeter is crystalline: axis-aligned faces weighted by y^{-n}
// (lateral) and y^{-n} (horizontal), measured strictly inside the cone.
// ---------------------------------------------------------------------------

struct ProductGrid {
  const SphericalMesh* base = nullptr;
  double T = 1.0;
  double dw = 0.25;
  int n = 2;

  int columns = 0;
  int levels = 0;        // (2T+2)/dw
  int band_lo = 0;       // first level at w >= -T (= 1/dw)
  int band_hi = 0;       // first level at w >= T  (= levels - 1/dw)

  std::vector<double> w_horiz;  // per column: area * y^{-n}
  std::vector<double> w_vol;    // per column: area * dw * y^{-(n+1)}
  struct LateralEdge {
    int c0, c1;
    double w;  // arc * dw * y_mid^{-n}
  };
  std::vector<LateralEdge> lateral;  // interior base edges only

  double level_floor(int l) const { return -T - 1 + l * dw; }
};

ProductGrid make_product_grid(const SphericalMesh& mesh, double T, double dw, int n);

struct VoxelSet {
  std::vector<std::vector<char>> occ;  // [column][level]
};

/// Containment check: bottom slab occupied, top slab empty, sizes match.
bool in_admissible_class(const ProductGrid& g, const VoxelSet& E);
void require_admissible(const ProductGrid& g, const VoxelSet& E);

/// Column values of a vertex field: piecewise-linear mean per triangle.
std::vector<double> column_values(const ProductGrid& g, const ScalarField& v);

/// Snap a column value to the nearest level multiple of dw.
double snap_to_grid(const ProductGrid& g, double v);

/// Subgraph of the snapped column values; requires max |v| < T.
VoxelSet subgraph_set(const ProductGrid& g, const std::vector<double>& col_vals);

double perimeter(const ProductGrid& g, const VoxelSet& E);
double volume(const ProductGrid& g, const VoxelSet& E);
/// F(E) = perimeter + n H volume.
double set_functional(const ProductGrid& g, const VoxelSet& E, double H);

struct RearrangeResult {
  std::vector<double> u;  // per-column rearranged height, on the grid
  VoxelSet set;           // subgraph of u
};

/// Fiber-wise radial rearrangement: per column the occupied band levels drop
/// to the bottom of the band. Preserves the per-column occupied counts
/// exactly and never increases the perimeter.
RearrangeResult rearrange(const ProductGrid& g, const VoxelSet& E);

struct SubmodularityResult {
  bool holds = false;
  double slack = 0.0;  // P(E1) + P(E2) - P(union) - P(intersection)
};
SubmodularityResult submodularity_check(const ProductGrid& g, const VoxelSet& E1,
                                        const VoxelSet& E2);

struct IdentityResult {
  double lhs = 0.0;  // F(subgraph(v))
  double rhs = 0.0;  // crystalline area + n H volume-of-v + k (T+1)
  double gap_rel = 0.0;
};

/// Exact combinatorial identity between the set functional of a subgraph and
/// the crystalline energy of its (grid-snapped) height function.
IdentityResult subgraph_energy_identity(const ProductGrid& g,
                                        const std::vector<double>& snapped_vals,
                                        double H);

/// Crystalline area of per-column values: sum over interior edges of
/// |v_i - v_j| arc y^{-n} plus one horizontal sheet per column.
double crystalline_area(const ProductGrid& g, const std::vector<double>& col_vals);

/// Discrete k = sum of area * y^{-(n+1)} over columns.
double volume_weight(const ProductGrid& g);

/// Uniformly random admissible set (free band bits i.i.d.).
VoxelSet random_member(const ProductGrid& g, std::mt19937_64& rng);

/// Run-length export "column_id: s0-e0,s1-e1,..." (inclusive level ranges of
/// occupied cells), one line per column; empty columns list nothing.
std::string voxel_rle_string(const ProductGrid& g, const VoxelSet& E);
VoxelSet voxel_from_rle(const ProductGrid& g, const std::string& text);

struct ExhaustiveResult {
  double min_value = 0.0;
  VoxelSet minimizer;        // lexicographically smallest free-cell mask
  int64_t tie_count = 0;     // additional sets attaining the minimum exactly
  bool subgraph_among_minimizers = false;
  int64_t sets_scanned = 0;
};

/// Exhaustive minimization of F over all sets squeezed between two subgraph
/// bounds (free cells <= 24). Ties are reported and broken by the smallest
/// enumeration mask.
ExhaustiveResult exhaustive_minimize(const ProductGrid& g, const VoxelSet& lower,
                                     const VoxelSet& upper, double H);

}  // namespace hypcmc
