#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "core/sphere_mesh.hpp"

namespace hypcmc {

/// Per-vertex real values on a SphericalMesh.
struct ScalarField {
  std::vector<double> values;
  std::string role;

  ScalarField() = default;
  ScalarField(int n, double fill, std::string role_tag = "")
      : values(n, fill), role(std::move(role_tag)) {}
  ScalarField(std::vector<double> vals, std::string role_tag = "")
      : values(std::move(vals)), role(std::move(role_tag)) {}

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[i]; }
  double operator[](int i) const { return values[i]; }

  void check_on(const SphericalMesh& mesh) const {
    if (size() != mesh.vertex_count())
      throw Error(ErrorCode::InvalidArgument, "field length does not match mesh");
    for (double v : values)
      if (!std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, "field has non-finite values");
  }

  double max_abs() const {
    double m = 0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

inline ScalarField boundary_distance(const SphericalMesh& mesh) {
  return ScalarField(boundary_distance_values(mesh), "boundary_distance");
}

/// CSV export with columns vertex_id,x,y,z,value.
void export_field_csv(const SphericalMesh& mesh, const ScalarField& f,
                      const std::string& path);
std::string field_csv_string(const SphericalMesh& mesh, const ScalarField& f);

}  // namespace hypcmc
