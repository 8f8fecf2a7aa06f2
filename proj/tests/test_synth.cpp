#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "bedmorph/bedgrid_io.hpp"
#include "bedmorph/dmd.hpp"
#include "bedmorph/errors.hpp"
#include "bedmorph/synth.hpp"
#include "test_helpers.hpp"

using namespace bedmorph;
using bedmorph::test::ScratchDir;
using Complex = std::complex<double>;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("no waves means a constant bed") {
  GridSpec grid{8, 2, 4, 0.1, 0.2, 30.0};
  const ElevationField field = generate({}, grid, 0.37);
  for (double v : field.values) CHECK(v == 0.37);
}

TEST_CASE("a persistent wave is an exact sampled rotation") {
  GridSpec grid{128, 1, 40, 0.05, 0.05, 120.0};
  WaveSpec wave{0.04, 1.6, 1920.0, 0.0, 0.7, SpanwiseProfile::Uniform};
  const ElevationField field = generate({wave}, grid, 0.0);

  DmdOptions opts;
  opts.rank = 2;
  const DmdModel model = dmd_from_field(field, 1.0, false, opts);
  const Complex expected = std::exp(Complex(0.0, kTwoPi * grid.dt / wave.period));
  const double err = bedmorph::test::max_eigen_recovery_error(
      {expected, std::conj(expected)},
      {model.discrete_eigs(0), model.discrete_eigs(1)});
  CHECK(err <= 1e-8);
}

TEST_CASE("a decaying wave lands inside the unit circle") {
  GridSpec grid{128, 1, 40, 0.05, 0.05, 120.0};
  const double g = -1.2e-4;  // e^{g dt} = 0.98570 < 0.99
  WaveSpec wave{0.04, 1.6, 1920.0, g, 0.0, SpanwiseProfile::Uniform};
  const ElevationField field = generate({wave}, grid, 0.0);

  const DmdModel model = dmd_from_field(field, 1.0, false);
  REQUIRE(model.rank == 2);
  const double modulus = std::abs(model.discrete_eigs(0));
  CHECK(modulus == doctest::Approx(std::exp(g * grid.dt)).epsilon(1e-8));
  CHECK(modulus < 0.99);
}

TEST_CASE("nyquist guards reject under-resolved waves") {
  GridSpec grid{64, 1, 10, 0.1, 0.1, 60.0};
  SUBCASE("wavelength under 4 dx") {
    WaveSpec wave{0.01, 0.39, 600.0, 0.0, 0.0, SpanwiseProfile::Uniform};
    try {
      generate({wave}, grid, 0.0);
      FAIL("expected GridTooCoarse");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GridTooCoarse);
    }
  }
  SUBCASE("period under 4 dt") {
    WaveSpec wave{0.01, 1.0, 239.0, 0.0, 0.0, SpanwiseProfile::Uniform};
    try {
      generate({wave}, grid, 0.0);
      FAIL("expected GridTooCoarse");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GridTooCoarse);
    }
  }
}

TEST_CASE("cosine spanwise profile peaks at the centerline and dies at walls") {
  GridSpec grid{32, 5, 6, 0.1, 0.1, 60.0};
  WaveSpec wave{0.1, 1.6, 600.0, 0.0, 0.0, SpanwiseProfile::Cosine};
  const ElevationField field = generate({wave}, grid, 0.0);

  double wall = 0.0, center = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    wall = std::max(wall, std::abs(field.at(i, 0, 0)));
    center = std::max(center, std::abs(field.at(i, 2, 0)));
  }
  CHECK(center == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(wall <= 1e-15);
}

TEST_CASE("negative period flips the migration direction") {
  GridSpec grid{128, 1, 12, 0.05, 0.05, 60.0};
  WaveSpec fwd{0.05, 3.2, 2400.0, 0.0, 0.0, SpanwiseProfile::Uniform};
  WaveSpec bwd = fwd;
  bwd.period = -2400.0;
  const ElevationField ff = generate({fwd}, grid, 0.0);
  const ElevationField fb = generate({bwd}, grid, 0.0);
  // One step forward in time equals the mirror wave one step backward.
  const double s = kTwoPi / 2400.0 * grid.dt;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x = double(i) * grid.dx;
    CHECK(ff.at(i, 0, 1) == doctest::Approx(0.05 * std::cos(kTwoPi * x / 3.2 - s)).epsilon(1e-12));
    CHECK(fb.at(i, 0, 1) == doctest::Approx(0.05 * std::cos(kTwoPi * x / 3.2 + s)).epsilon(1e-12));
  }
}

TEST_CASE("noise is deterministic per seed") {
  Scenario scenario = load_scenario(std::string(BEDMORPH_SCENARIO_DIR) + "/paper_shape.json");
  scenario.grid.nx = 32;
  scenario.grid.nt = 10;
  const ElevationField a = generate(scenario);
  const ElevationField b = generate(scenario);
  CHECK(a.values == b.values);
  scenario.seed += 1;
  const ElevationField c = generate(scenario);
  CHECK(a.values != c.values);
}

TEST_CASE("scenario files round-trip through the generator and BEDGRID") {
  ScratchDir dir("synth_io");
  const Scenario scenario = load_scenario(std::string(BEDMORPH_SCENARIO_DIR) + "/two_wave.json");
  const ElevationField field = generate(scenario);
  const std::string path = (dir / "two_wave.bedgrid").string();
  write_bedgrid(field, path);
  const ElevationField back = read_field(path);
  CHECK(back.values == field.values);
  CHECK_THROWS_AS(parse_scenario("{ not json"), Error);
  CHECK_THROWS_AS(parse_scenario("{}"), Error);
}

TEST_CASE("oracle vanishes on a static field") {
  const auto field = bedmorph::test::make_field(
      32, 1, 8, 0.1, 0.1, 60.0,
      [](std::size_t i, std::size_t, std::size_t) { return 0.2 + 0.03 * double(i % 5); });
  for (std::size_t t = 1; t + 1 < field.nt; ++t) {
    CHECK(oracle_net_flux(field, 0.4, 0, 0, 31, t) == 0.0);
  }
}

TEST_CASE("oracle matches the closed-form flux of a traveling wave") {
  // eta = a cos(kx - sigma t + psi):
  //   -(1-lp) * int d eta/dt dx = (1-lp)(aL/T)(cos theta_b - cos theta_a).
  GridSpec grid{512, 1, 64, 0.0125, 0.0125, 20.0};
  const double a = 0.05, L = 1.6, T = 6400.0, psi = 0.6, lp = 0.4;
  WaveSpec wave{a, L, T, 0.0, psi, SpanwiseProfile::Uniform};
  const ElevationField field = generate({wave}, grid, 0.1);

  const std::size_t x_min = 7, x_max = 461;
  const double k = kTwoPi / L, sigma = kTwoPi / T;
  // Principled truncation bound: central difference O((sigma dt)^2/6) plus
  // trapezoid O((k dx)^2/12), with headroom for constants.
  const double bound =
      3.0 * (std::pow(sigma * grid.dt, 2) / 6.0 + std::pow(k * grid.dx, 2) / 12.0);

  for (std::size_t t_index : {5UL, 20UL, 40UL, 62UL}) {
    const double t = double(t_index) * grid.dt;
    const double theta_a = k * double(x_min) * grid.dx - sigma * t + psi;
    const double theta_b = k * double(x_max) * grid.dx - sigma * t + psi;
    const double analytic = (1.0 - lp) * (a * L / T) * (std::cos(theta_b) - std::cos(theta_a));
    const double fd = oracle_net_flux(field, lp, 0, x_min, x_max, t_index);
    CHECK(std::abs(fd - analytic) <= bound * std::abs(analytic) + 1e-18);
  }
}

TEST_CASE("halving the steps shrinks the oracle error at second order") {
  const double a = 0.04, L = 2.0, T = 4800.0, psi = 0.3, lp = 0.4;
  auto run = [&](std::size_t nx, double dx, double dt, std::size_t t_index) {
    GridSpec grid{nx, 1, 48, dx, dx, dt};
    WaveSpec wave{a, L, T, 0.0, psi, SpanwiseProfile::Uniform};
    const ElevationField field = generate({wave}, grid, 0.0);
    const double k = kTwoPi / L, sigma = kTwoPi / T;
    const double t = double(t_index) * dt;
    const std::size_t x_max = nx - 1;
    const double theta_a = psi - sigma * t;
    const double theta_b = k * double(x_max) * dx - sigma * t + psi;
    const double analytic = (1.0 - lp) * (a * L / T) * (std::cos(theta_b) - std::cos(theta_a));
    return std::abs(oracle_net_flux(field, lp, 0, 0, x_max, t_index) - analytic) /
           std::abs(analytic);
  };
  // Same span and same physical evaluation time at both resolutions.
  const double coarse = run(101, 0.05, 240.0, 10);
  const double fine = run(201, 0.025, 120.0, 20);
  CHECK(fine < coarse);
  CHECK(std::log2(coarse / fine) >= 1.8);
}

TEST_CASE("porosity prefactor is linear and power-of-two exact") {
  GridSpec grid{64, 1, 8, 0.1, 0.1, 60.0};
  WaveSpec wave{0.05, 1.6, 960.0, 0.0, 0.1, SpanwiseProfile::Uniform};
  const ElevationField field = generate({wave}, grid, 0.0);
  const double q_half = oracle_net_flux(field, 0.5, 0, 0, 63, 3);
  const double q_zero = oracle_net_flux(field, 0.0, 0, 0, 63, 3);
  CHECK(q_zero == 2.0 * q_half);
}

TEST_CASE("oracle is additive over superposed fields") {
  GridSpec grid{128, 1, 12, 0.05, 0.05, 60.0};
  WaveSpec w1{0.05, 1.6, 1200.0, 0.0, 0.2, SpanwiseProfile::Uniform};
  WaveSpec w2{0.03, 3.2, 2400.0, -1e-5, 1.4, SpanwiseProfile::Uniform};
  const ElevationField f1 = generate({w1}, grid, 0.0);
  const ElevationField f2 = generate({w2}, grid, 0.0);
  const ElevationField f12 = generate({w1, w2}, grid, 0.0);
  for (std::size_t t : {2UL, 6UL, 9UL}) {
    const double o1 = oracle_net_flux(f1, 0.4, 0, 0, 127, t);
    const double o2 = oracle_net_flux(f2, 0.4, 0, 0, 127, t);
    const double o12 = oracle_net_flux(f12, 0.4, 0, 0, 127, t);
    // Linear operator; only sample-accumulation roundoff separates the two.
    CHECK(std::abs(o12 - (o1 + o2)) <= 1e-12 * (std::abs(o1) + std::abs(o2) + 1e-12));
  }
}

TEST_CASE("oracle guards its domain") {
  const auto field = bedmorph::test::make_field(
      16, 2, 6, 0.1, 0.1, 30.0,
      [](std::size_t i, std::size_t, std::size_t t) { return double(i + t); });
  try {
    oracle_net_flux(field, 0.4, 0, 0, 15, 0);
    FAIL("expected BoundaryTimeIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryTimeIndex);
  }
  try {
    oracle_net_flux(field, 0.4, 0, 0, 15, 5);
    FAIL("expected BoundaryTimeIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryTimeIndex);
  }
  try {
    oracle_net_flux(field, 0.4, 2, 0, 15, 2);
    FAIL("expected TransectOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TransectOutOfRange);
  }
  try {
    oracle_net_flux(field, 0.4, 0, 7, 7, 2);
    FAIL("expected DegenerateRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRange);
  }
  try {
    oracle_net_flux(field, 1.0, 0, 0, 15, 2);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}
