#pragma once

#include <cstddef>
#include <vector>

namespace bedmorph {

/// Gridded bed-elevation record eta(x, y, t) on a uniform Cartesian grid.
///
/// Storage is snapshot-major with row-major planes: sample (i, j, t) lives at
/// values[(t*nx + i)*ny + j], where i indexes the streamwise direction and j
/// the spanwise direction. A single snapshot is therefore already laid out in
/// the row-major vectorization order used by the snapshot matrix, and the
/// on-disk BEDGRID payload is the values vector verbatim.
struct ElevationField {
  std::vector<double> values;        // nx*ny*nt samples, meters
  std::size_t nx = 0;                // streamwise point count
  std::size_t ny = 0;                // spanwise point count
  std::size_t nt = 0;                // snapshot count
  double dx = 0.0;                   // streamwise spacing, meters
  double dy = 0.0;                   // spanwise spacing, meters
  double dt = 0.0;                   // sampling interval, seconds
  double x0 = 0.0;                   // grid origin, meters
  double y0 = 0.0;

  std::size_t plane_size() const { return nx * ny; }
  std::size_t sample_count() const { return nx * ny * nt; }

  double& at(std::size_t i, std::size_t j, std::size_t t) {
    return values[(t * nx + i) * ny + j];
  }
  double at(std::size_t i, std::size_t j, std::size_t t) const {
    return values[(t * nx + i) * ny + j];
  }

  const double* snapshot(std::size_t t) const { return values.data() + t * plane_size(); }
  double* snapshot(std::size_t t) { return values.data() + t * plane_size(); }

  double time_of(std::size_t t) const { return static_cast<double>(t) * dt; }
};

/// Checks the ingestion invariants: nx >= 2, ny >= 1, nt >= 3, strictly
/// positive spacings, a consistent sample count and all-finite values.
/// Throws Error(NonFiniteInput / InvalidArgument) on violation.
void validate(const ElevationField& field);

}  // namespace bedmorph
