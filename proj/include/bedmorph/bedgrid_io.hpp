#pragma once

#include <string>

#include "bedmorph/elevation_field.hpp"

namespace bedmorph {

// BEDGRID v1: one ASCII header line
//   BEDGRID v1 nx=<int> ny=<int> nt=<int> dx=<f> dy=<f> dt=<f> x0=<f> y0=<f>\n
// followed by nx*ny*nt little-endian float64 samples in (t, x, y) order.

ElevationField read_bedgrid(const std::string& path);
void write_bedgrid(const ElevationField& field, const std::string& path);

// Per-snapshot CSV directory: meta.json (dx/dy/dt and optional x0/y0) plus one
// CSV per snapshot (rows = x index, columns = y index), consumed in
// lexicographic filename order. write_csv_dir names them snapshot_00000.csv...
ElevationField read_csv_dir(const std::string& dir);
void write_csv_dir(const ElevationField& field, const std::string& dir);

/// Reads either format: directories are treated as CSV snapshot sets, regular
/// files as BEDGRID containers.
ElevationField read_field(const std::string& path);

}  // namespace bedmorph
