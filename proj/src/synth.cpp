#include "bedmorph/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "bedmorph/errors.hpp"

namespace bedmorph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_wave(const WaveSpec& wave, const GridSpec& grid) {
  if (!(wave.wavelength > 0.0)) raise(ErrorCode::InvalidArgument, "wavelength must be positive");
  if (wave.period == 0.0) raise(ErrorCode::InvalidArgument, "period must be nonzero");
  if (!(wave.amplitude >= 0.0)) raise(ErrorCode::InvalidArgument, "amplitude must be >= 0");
  if (wave.decay_rate > 0.0) raise(ErrorCode::InvalidArgument, "decay rate must be <= 0");
  if (wave.wavelength < 4.0 * grid.dx) {
    raise(ErrorCode::GridTooCoarse,
          "wavelength " + std::to_string(wave.wavelength) + " m needs dx <= " +
              std::to_string(wave.wavelength / 4.0) + " m");
  }
  if (std::abs(wave.period) < 4.0 * grid.dt) {
    raise(ErrorCode::GridTooCoarse,
          "period " + std::to_string(wave.period) + " s needs dt <= " +
              std::to_string(std::abs(wave.period) / 4.0) + " s");
  }
}

double spanwise_factor(SpanwiseProfile profile, std::size_t j, std::size_t ny) {
  if (profile == SpanwiseProfile::Uniform || ny < 2) return 1.0;
  // Half-cosine channel shape: 1 at the centerline, 0 at both walls.
  const double frac = static_cast<double>(j) / static_cast<double>(ny - 1);
  return std::cos(std::numbers::pi * (frac - 0.5));
}

SpanwiseProfile parse_spanwise(const std::string& name) {
  if (name == "uniform") return SpanwiseProfile::Uniform;
  if (name == "cosine") return SpanwiseProfile::Cosine;
  raise(ErrorCode::InvalidArgument, "unknown spanwise profile '" + name + "'");
}

}  // namespace

ElevationField generate(const std::vector<WaveSpec>& waves, const GridSpec& grid,
                        double mean_bed) {
  if (grid.nx < 2 || grid.ny < 1 || grid.nt < 3) {
    raise(ErrorCode::InvalidArgument, "grid must satisfy nx >= 2, ny >= 1, nt >= 3");
  }
  if (!(grid.dx > 0.0) || !(grid.dy > 0.0) || !(grid.dt > 0.0)) {
    raise(ErrorCode::InvalidArgument, "grid spacings must be positive");
  }
  for (const WaveSpec& wave : waves) check_wave(wave, grid);

  ElevationField field;
  field.nx = grid.nx;
  field.ny = grid.ny;
  field.nt = grid.nt;
  field.dx = grid.dx;
  field.dy = grid.dy;
  field.dt = grid.dt;
  field.x0 = grid.x0;
  field.y0 = grid.y0;
  field.values.assign(field.sample_count(), mean_bed);

  for (const WaveSpec& wave : waves) {
    const double wavenumber = kTwoPi / wave.wavelength;
    const double sigma = kTwoPi / wave.period;
    for (std::size_t t = 0; t < grid.nt; ++t) {
      const double time = static_cast<double>(t) * grid.dt;
      const double envelope = wave.amplitude * std::exp(wave.decay_rate * time);
      for (std::size_t i = 0; i < grid.nx; ++i) {
        const double x = static_cast<double>(i) * grid.dx;
        const double carrier = std::cos(wavenumber * x - sigma * time + wave.phase);
        for (std::size_t j = 0; j < grid.ny; ++j) {
          field.at(i, j, t) += envelope * carrier * spanwise_factor(wave.spanwise, j, grid.ny);
        }
      }
    }
  }
  return field;
}

ElevationField generate(const Scenario& scenario) {
  ElevationField field = generate(scenario.waves, scenario.grid, scenario.mean_bed);
  if (scenario.noise_std > 0.0) {
    std::mt19937_64 rng(scenario.seed);
    std::normal_distribution<double> noise(0.0, scenario.noise_std);
    for (double& v : field.values) v += noise(rng);
  }
  return field;
}

Scenario parse_scenario(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    raise(ErrorCode::CorruptPayload, std::string("bad scenario JSON: ") + e.what());
  }

  Scenario scenario;
  try {
    const auto& g = doc.at("grid");
    scenario.grid.nx = g.at("nx").get<std::size_t>();
    scenario.grid.ny = g.at("ny").get<std::size_t>();
    scenario.grid.nt = g.at("nt").get<std::size_t>();
    scenario.grid.dx = g.at("dx").get<double>();
    scenario.grid.dy = g.at("dy").get<double>();
    scenario.grid.dt = g.at("dt").get<double>();
    scenario.grid.x0 = g.value("x0", 0.0);
    scenario.grid.y0 = g.value("y0", 0.0);
    scenario.mean_bed = doc.value("mean_bed", 0.0);
    scenario.noise_std = doc.value("noise_std", 0.0);
    scenario.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& w : doc.at("waves")) {
      WaveSpec wave;
      wave.amplitude = w.at("amplitude").get<double>();
      wave.wavelength = w.at("wavelength").get<double>();
      wave.period = w.at("period").get<double>();
      wave.decay_rate = w.value("decay_rate", 0.0);
      wave.phase = w.value("phase", 0.0);
      wave.spanwise = parse_spanwise(w.value("spanwise", std::string("uniform")));
      scenario.waves.push_back(wave);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::InvalidArgument, std::string("incomplete scenario: ") + e.what());
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::InputNotFound, "cannot open scenario: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

double oracle_net_flux(const ElevationField& field, double porosity,
                       std::size_t y_index, std::size_t x_min, std::size_t x_max,
                       std::size_t t_index) {
  if (!(porosity >= 0.0) || !(porosity < 1.0)) {
    raise(ErrorCode::InvalidArgument, "porosity must lie in [0, 1)");
  }
  if (y_index >= field.ny) raise(ErrorCode::TransectOutOfRange, "transect outside grid");
  if (x_max >= field.nx) raise(ErrorCode::TransectOutOfRange, "x range exceeds grid");
  if (x_max < x_min + 1) raise(ErrorCode::DegenerateRange, "x range must hold two points");
  if (t_index < 1 || t_index + 1 >= field.nt) {
    raise(ErrorCode::BoundaryTimeIndex,
          "central difference needs interior time index, got " + std::to_string(t_index));
  }

  auto dt_rate = [&](std::size_t i) {
    return (field.at(i, y_index, t_index + 1) - field.at(i, y_index, t_index - 1)) /
           (2.0 * field.dt);
  };

  double integral = 0.5 * (dt_rate(x_min) + dt_rate(x_max));
  for (std::size_t i = x_min + 1; i < x_max; ++i) integral += dt_rate(i);
  integral *= field.dx;
  return -(1.0 - porosity) * integral;
}

}  // namespace bedmorph
