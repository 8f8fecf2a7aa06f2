#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bedmorph/elevation_field.hpp"

namespace bedmorph {

enum class SpanwiseProfile { Uniform, Cosine };

/// One traveling (optionally decaying) sinusoidal bedform:
///   a * e^{g t} * cos(2 pi x / L - 2 pi t / T + psi) * s(y).
/// The sign of the period sets the migration direction; decay_rate g <= 0.
/// Each wave is an exact two-mode linear system with continuous eigenvalues
/// g -+ i 2 pi / T.
struct WaveSpec {
  double amplitude = 0.0;    // a, meters
  double wavelength = 0.0;   // L, meters
  double period = 0.0;       // T, seconds (nonzero)
  double decay_rate = 0.0;   // g, 1/seconds
  double phase = 0.0;        // psi, radians
  SpanwiseProfile spanwise = SpanwiseProfile::Uniform;
};

struct GridSpec {
  std::size_t nx = 0, ny = 1, nt = 0;
  double dx = 0.0, dy = 0.0, dt = 0.0;
  double x0 = 0.0, y0 = 0.0;
};

struct Scenario {
  GridSpec grid;
  double mean_bed = 0.0;     // meters
  double noise_std = 0.0;    // additive Gaussian noise, meters
  std::uint64_t seed = 0;
  std::vector<WaveSpec> waves;
};

/// Superposes the waves over the grid on top of mean_bed. Throws
/// GridTooCoarse when any wavelength < 4*dx or |period| < 4*dt.
ElevationField generate(const std::vector<WaveSpec>& waves, const GridSpec& grid,
                        double mean_bed);

/// generate() plus seeded Gaussian noise when noise_std > 0.
ElevationField generate(const Scenario& scenario);

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

/// Independent Exner ground truth evaluated directly from the data:
/// central difference (eta(t+dt) - eta(t-dt)) / (2 dt) along the transect,
/// trapezoidal x-integral over [x_min, x_max], times -(1 - porosity).
/// t_index must be interior: 1 <= t_index <= nt-2.
double oracle_net_flux(const ElevationField& field, double porosity,
                       std::size_t y_index, std::size_t x_min, std::size_t x_max,
                       std::size_t t_index);

}  // namespace bedmorph
