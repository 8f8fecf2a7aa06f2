#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "bedmorph/dmd.hpp"
#include "bedmorph/errors.hpp"
#include "bedmorph/model_io.hpp"
#include "bedmorph/synth.hpp"
#include "test_helpers.hpp"

using namespace bedmorph;
using bedmorph::test::ScratchDir;
using bedmorph::test::max_eigen_recovery_error;
using Complex = std::complex<double>;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Trajectory of an explicit linear map, columns h_k = A^k h_0.
Eigen::MatrixXd linear_trajectory(const Eigen::MatrixXd& A, const Eigen::VectorXd& h0,
                                  int steps) {
  Eigen::MatrixXd H(A.rows(), steps);
  Eigen::VectorXd h = h0;
  for (int k = 0; k < steps; ++k) {
    H.col(k) = h;
    h = A * h;
  }
  return H;
}

DmdModel dmd_of_trajectory(const Eigen::MatrixXd& H, double dt, const DmdOptions& opts = {},
                           DmdInfo* info = nullptr) {
  const auto q = H.cols() - 1;
  GridShape grid{static_cast<std::size_t>(H.rows()), 1, 0.1, 0.1};
  return compute_dmd(H.leftCols(q), H.rightCols(q), dt, Eigen::VectorXd::Zero(H.rows()),
                     grid, opts, info);
}

std::vector<Complex> eigs_of(const DmdModel& model) {
  std::vector<Complex> out;
  for (int k = 0; k < model.rank; ++k) out.push_back(model.discrete_eigs(k));
  return out;
}

}  // namespace

TEST_CASE("rotation dynamics yield the analytic conjugate pair") {
  const double theta = 0.7;
  Eigen::MatrixXd A(2, 2);
  A << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::VectorXd h0(2);
  h0 << 1.0, 0.25;

  const Eigen::MatrixXd H = linear_trajectory(A, h0, 20);
  const DmdModel model = dmd_of_trajectory(H, 1.0);

  REQUIRE(model.rank == 2);
  const std::vector<Complex> expected = {std::polar(1.0, theta), std::polar(1.0, -theta)};
  CHECK(max_eigen_recovery_error(expected, eigs_of(model)) <= 1e-10);
}

TEST_CASE("identity dynamics give the unit eigenvalue") {
  Eigen::VectorXd h0(3);
  h0 << 0.2, 0.3, 0.1;
  Eigen::MatrixXd H(3, 6);
  for (int k = 0; k < 6; ++k) H.col(k) = h0;

  const DmdModel model = dmd_of_trajectory(H, 2.0);
  REQUIRE(model.rank == 1);
  CHECK(std::abs(model.discrete_eigs(0) - Complex(1.0, 0.0)) <= 1e-12);
  CHECK(std::abs(model.continuous_eigs(0)) <= 1e-13);
}

TEST_CASE("a zero fluctuation matrix produces an empty model") {
  const auto field = bedmorph::test::make_field(
      16, 1, 8, 0.1, 0.1, 1.0,
      [](std::size_t i, std::size_t, std::size_t) { return 0.3 + 0.01 * double(i); });
  const DmdModel model = dmd_from_field(field, 1.0, true);
  CHECK(model.rank == 0);
  // Reconstruction falls back to the stored mean at any time.
  const Eigen::MatrixXd recon = reconstruct(model, 123.0);
  for (std::size_t i = 0; i < 16; ++i) CHECK(recon(i, 0) == field.at(i, 0, 0));
}

TEST_CASE("explicit rank beyond the spectrum is rejected") {
  Eigen::VectorXd u(5), v(6);
  u << 1, 2, 3, 4, 5;
  v << 1, 0.9, 0.8, 0.7, 0.6, 0.5;
  const Eigen::MatrixXd H = u * v.transpose();  // rank 1
  DmdOptions opts;
  opts.rank = 3;
  try {
    dmd_of_trajectory(H, 1.0, opts);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("reconstruction at t=0 projects onto the first snapshot") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd A(6, 6);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = dist(rng);
  A *= 0.9 / A.eigenvalues().cwiseAbs().maxCoeff();  // spectral radius under one
  Eigen::VectorXd h0(6);
  for (int i = 0; i < 6; ++i) h0(i) = dist(rng);

  const Eigen::MatrixXd H = linear_trajectory(A, h0, 24);
  const DmdModel model = dmd_of_trajectory(H, 1.0);
  REQUIRE(model.rank == 6);

  double residual = 0.0;
  const Eigen::VectorXd recon = reconstruct_vec(model, 0.0, &residual);
  CHECK((recon - h0).norm() <= 1e-8 * h0.norm());
  CHECK(residual <= 1e-6 * recon.cwiseAbs().maxCoeff());
}

TEST_CASE("one-step prediction on exact linear data") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd A(8, 8);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = dist(rng);
  A *= 0.95 / A.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd h0(8);
  for (int i = 0; i < 8; ++i) h0(i) = dist(rng);

  const Eigen::MatrixXd H = linear_trajectory(A, h0, 30);
  const DmdModel model = dmd_of_trajectory(H, 1.0);
  REQUIRE(model.rank == 8);

  // Phi diag(lambda) pinv(Phi) h_k == h_{k+1} for every training column.
  const auto solver = model.modes.completeOrthogonalDecomposition();
  for (int k = 0; k + 1 < H.cols(); ++k) {
    const Eigen::VectorXcd coeffs = solver.solve(H.col(k).cast<Complex>().eval());
    const Eigen::VectorXcd pred = model.modes * model.discrete_eigs.cwiseProduct(coeffs);
    const double err = (pred.real() - H.col(k + 1)).norm() / H.col(k + 1).norm();
    CHECK(err <= 1e-6);
  }
}

TEST_CASE("eigenvalue recovery for a known exponential mixture") {
  // h_k = sum_j c_j v_j mu_j^k with three conjugate pairs; real data.
  std::mt19937_64 rng(41);
  std::normal_distribution<double> dist(0.0, 1.0);
  const int mn = 12;
  const std::vector<Complex> mu = {
      std::polar(0.97, 0.5),  std::polar(0.97, -0.5), std::polar(1.0, 1.1),
      std::polar(1.0, -1.1),  std::polar(1.02, 0.2),  std::polar(1.02, -0.2),
  };
  Eigen::MatrixXcd V(mn, 6);
  for (int j = 0; j < 6; j += 2) {
    for (int i = 0; i < mn; ++i) {
      const Complex v(dist(rng), dist(rng));
      V(i, j) = v;
      V(i, j + 1) = std::conj(v);
    }
  }
  const int steps = 25;
  Eigen::MatrixXd H(mn, steps);
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(mn);
    for (int j = 0; j < 6; ++j) h += V.col(j) * std::pow(mu[j], k);
    H.col(k) = h.real();
  }

  DmdOptions opts;
  opts.rank = 6;
  const DmdModel model = dmd_of_trajectory(H, 1.0, opts);
  CHECK(max_eigen_recovery_error(mu, eigs_of(model)) <= 1e-8);

  // Conjugate closure: the recovered multiset pairs with its own conjugates.
  for (int k = 0; k < model.rank; ++k) {
    const Complex target = std::conj(model.discrete_eigs(k));
    double best = 1e300;
    for (int j = 0; j < model.rank; ++j) {
      best = std::min(best, std::abs(model.discrete_eigs(j) - target));
    }
    CHECK(best <= 1e-8 * std::abs(model.discrete_eigs(k)));
  }
}

TEST_CASE("continuous eigenvalues follow the principal logarithm") {
  const auto scenario = load_scenario(std::string(BEDMORPH_SCENARIO_DIR) + "/three_wave.json");
  const ElevationField field = generate(scenario);
  const DmdModel model = dmd_from_field(field, 0.98, false);
  for (int k = 0; k < model.rank; ++k) {
    const Complex expected = std::log(model.discrete_eigs(k)) / model.dt;
    CHECK(std::abs(model.continuous_eigs(k) - expected) <=
          1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("modes are ordered by descending power") {
  const auto scenario = load_scenario(std::string(BEDMORPH_SCENARIO_DIR) + "/three_wave.json");
  const ElevationField field = generate(scenario);
  const DmdModel model = dmd_from_field(field, 0.98, false);
  for (int k = 0; k + 1 < model.rank; ++k) {
    const double pk = std::norm(model.amplitudes(k)) * model.modes.col(k).squaredNorm();
    const double pn = std::norm(model.amplitudes(k + 1)) * model.modes.col(k + 1).squaredNorm();
    CHECK(pk >= pn);
  }
}

TEST_CASE("mean-removed pipeline equals mean-plus-fluctuation reconstruction") {
  const auto scenario = load_scenario(std::string(BEDMORPH_SCENARIO_DIR) + "/three_wave.json");
  const ElevationField field = generate(scenario);

  const SnapshotMatrix H = build_snapshot_matrix(field, true);
  const std::size_t q = training_pair_count(0.98, H.p);
  GridShape grid{field.nx, field.ny, field.dx, field.dy};
  const DmdModel with_mean = compute_dmd(H.data.leftCols(q), H.data.middleCols(1, q), field.dt,
                                         H.mean_field, grid);
  DmdModel zero_mean = with_mean;
  zero_mean.mean_field = Eigen::VectorXd::Zero(with_mean.mean_field.size());

  for (double t : {0.0, 5.5 * field.dt, 60.0 * field.dt}) {
    const Eigen::VectorXd full = reconstruct_vec(with_mean, t);
    const Eigen::VectorXd fluct = reconstruct_vec(zero_mean, t);
    const Eigen::VectorXd manual = H.mean_field + fluct;
    CHECK((full - manual).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("single-wave reconstruction generalizes to held-out snapshots") {
  GridSpec grid{256, 1, 50, 0.05, 0.05, 120.0};
  WaveSpec wave{0.03, 1.6, 1920.0, 0.0, 0.4, SpanwiseProfile::Uniform};
  const ElevationField field = generate({wave}, grid, 0.2);
  const DmdModel model = dmd_from_field(field, 0.9, true);  // q = 45, held-out tail

  const std::size_t heldout = 47;
  const Eigen::MatrixXd recon = reconstruct(model, field.time_of(heldout));
  double acc = 0.0;
  for (std::size_t i = 0; i < field.nx; ++i) {
    acc += std::abs(recon(i, 0) - field.at(i, 0, heldout)) / std::abs(field.at(i, 0, heldout));
  }
  const double mape_percent = 100.0 * acc / double(field.nx);
  CHECK(mape_percent < 1.0);
}

TEST_CASE("reconstruct_series stacks snapshots and flags non-uniform times") {
  GridSpec grid{64, 1, 20, 0.1, 0.1, 60.0};
  WaveSpec wave{0.05, 1.6, 1200.0, 0.0, 0.9, SpanwiseProfile::Uniform};
  const ElevationField field = generate({wave}, grid, 0.0);
  const DmdModel model = dmd_from_field(field, 1.0, false);

  SUBCASE("single time") {
    const auto series = reconstruct_series(model, {0.0});
    CHECK(series.field.nt == 1);
    const Eigen::MatrixXd direct = reconstruct(model, 0.0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(series.field.at(i, 0, 0) == direct(i, 0));
  }

  SUBCASE("original sample times match the input field") {
    std::vector<double> times;
    for (std::size_t t = 0; t < field.nt; ++t) times.push_back(field.time_of(t));
    const auto series = reconstruct_series(model, times);
    CHECK(series.uniform_times);
    CHECK(series.field.nt == field.nt);
    double worst = 0.0;
    for (std::size_t t = 0; t < field.nt; ++t)
      for (std::size_t i = 0; i < field.nx; ++i)
        worst = std::max(worst, std::abs(series.field.at(i, 0, t) - field.at(i, 0, t)));
    CHECK(worst <= 1e-8);
  }

  SUBCASE("double resolution interpolates the analytic wave") {
    // Midpoint snapshots compared against the closed-form field, evaluated
    // independently of the decomposition.
    std::vector<double> times;
    for (std::size_t t = 0; t < 2 * field.nt - 1; ++t) {
      times.push_back(0.5 * double(t) * field.dt);
    }
    const auto series = reconstruct_series(model, times);
    CHECK(series.uniform_times);
    REQUIRE(series.field.nt == 2 * field.nt - 1);
    const double k = kTwoPi / wave.wavelength;
    const double sigma = kTwoPi / wave.period;
    double worst = 0.0;
    for (std::size_t t = 1; t < series.field.nt; t += 2) {  // the new midpoints
      const double time = series.field.time_of(t);
      for (std::size_t i = 0; i < field.nx; ++i) {
        const double x = double(i) * field.dx;
        const double expected = wave.amplitude * std::cos(k * x - sigma * time + wave.phase);
        worst = std::max(worst, std::abs(series.field.at(i, 0, t) - expected));
      }
    }
    CHECK(worst <= 1e-8);
  }

  SUBCASE("non-uniform times are flagged, not fatal") {
    const auto series = reconstruct_series(model, {0.0, 60.0, 75.0, 200.0});
    CHECK_FALSE(series.uniform_times);
    CHECK(series.field.nt == 4);
  }

  SUBCASE("descending times are rejected") {
    CHECK_THROWS_AS(reconstruct_series(model, {10.0, 5.0}), Error);
  }
}

TEST_CASE("zero eigenvalues are flagged and excluded from continuous analysis") {
  // Direct construction: compute_dmd cannot be forced to produce an exact
  // zero, but the contract on such modes is testable on a handcrafted model.
  DmdModel model;
  model.rank = 1;
  model.grid_m = 4;
  model.grid_n = 1;
  model.dt = 1.0;
  model.dx = 0.1;
  model.dy = 0.1;
  model.modes = Eigen::MatrixXcd::Ones(4, 1);
  model.discrete_eigs = Eigen::VectorXcd::Zero(1);
  model.continuous_eigs = Eigen::VectorXcd::Constant(
      1, Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
  model.amplitudes = Eigen::VectorXcd::Ones(1);
  model.mean_field = Eigen::VectorXd::Zero(4);
  model.train_count = 3;

  CHECK(model.mode_excluded(0));
  const Eigen::VectorXd recon = reconstruct_vec(model, 2.0);
  CHECK(recon.cwiseAbs().maxCoeff() == 0.0);  // excluded from reconstruction
}

TEST_CASE("least-squares amplitudes agree with the initial-snapshot fit on exact data") {
  const auto scenario = load_scenario(std::string(BEDMORPH_SCENARIO_DIR) + "/three_wave.json");
  const ElevationField field = generate(scenario);

  DmdOptions ls;
  ls.amplitude_method = AmplitudeMethod::LeastSquaresAllSnapshots;
  const DmdModel a = dmd_from_field(field, 0.98, false);
  const DmdModel b = dmd_from_field(field, 0.98, false, ls);
  REQUIRE(a.rank == b.rank);
  // Same eigenvalue ordering holds because powers coincide to roundoff; match
  // amplitudes through the eigenvalues to stay order-independent.
  for (int k = 0; k < a.rank; ++k) {
    int match = 0;
    double best = 1e300;
    for (int j = 0; j < b.rank; ++j) {
      const double d = std::abs(b.discrete_eigs(j) - a.discrete_eigs(k));
      if (d < best) {
        best = d;
        match = j;
      }
    }
    const Complex pa = a.amplitudes(k) * a.modes.col(k).sum();
    const Complex pb = b.amplitudes(match) * b.modes.col(match).sum();
    CHECK(std::abs(pa - pb) <= 1e-8 * std::max(1.0, std::abs(pa)));
  }
}

TEST_CASE("model save/load round-trips bit-exactly") {
  ScratchDir dir("model_io");
  const auto scenario = load_scenario(std::string(BEDMORPH_SCENARIO_DIR) + "/three_wave.json");
  const ElevationField field = generate(scenario);
  const DmdModel model = dmd_from_field(field, 0.98, true);

  const std::string path = (dir / "m.dmdmodel").string();
  save_model(model, path);
  const DmdModel back = load_model(path);

  CHECK(back.rank == model.rank);
  CHECK(back.dt == model.dt);
  CHECK(back.dx == model.dx);
  CHECK(back.grid_m == model.grid_m);
  CHECK(back.grid_n == model.grid_n);
  CHECK(back.train_count == model.train_count);
  CHECK(back.modes.cwiseEqual(model.modes).all());
  CHECK(back.discrete_eigs.cwiseEqual(model.discrete_eigs).all());
  CHECK(back.continuous_eigs.cwiseEqual(model.continuous_eigs).all());
  CHECK(back.amplitudes.cwiseEqual(model.amplitudes).all());
  CHECK(back.mean_field.cwiseEqual(model.mean_field).all());

  // Save twice: identical bytes (determinism of the container).
  const std::string path2 = (dir / "m2.dmdmodel").string();
  save_model(model, path2);
  CHECK(bedmorph::test::read_file(path) == bedmorph::test::read_file(path2));
}

TEST_CASE("model container rejects damage") {
  ScratchDir dir("model_bad");
  GridSpec grid{32, 1, 12, 0.1, 0.1, 30.0};
  WaveSpec wave{0.05, 1.6, 600.0, 0.0, 0.0, SpanwiseProfile::Uniform};
  const ElevationField field = generate({wave}, grid, 0.1);
  const DmdModel model = dmd_from_field(field, 1.0, true);
  const std::string path = (dir / "m.dmdmodel").string();
  save_model(model, path);
  auto bytes = bedmorph::test::read_file(path);

  SUBCASE("truncation") {
    std::ofstream(path, std::ios::binary) << bytes.substr(0, bytes.size() - 7);
    try {
      load_model(path);
      FAIL("expected CorruptPayload");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CorruptPayload);
    }
  }
  SUBCASE("version bump") {
    auto damaged = bytes;
    damaged[10] = '2';  // "DMDMODEL v2"
    std::ofstream(path, std::ios::binary) << damaged;
    try {
      load_model(path);
      FAIL("expected FormatVersionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FormatVersionMismatch);
    }
  }
  SUBCASE("payload bit flip fails the checksum") {
    auto damaged = bytes;
    damaged[damaged.size() / 2] ^= 0x40;
    std::ofstream(path, std::ios::binary) << damaged;
    try {
      load_model(path);
      FAIL("expected CorruptPayload");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CorruptPayload);
    }
  }
}

TEST_CASE("singular values of an ill-conditioned tall matrix stay accurate") {
  // Accuracy contract for the SVD kernel: designed spectrum spanning a 1e8
  // condition number, random orthogonal factors; every recovered singular
  // value within 1e-10 of the design, measured against sigma_1. A Gram-matrix
  // (H1^T H1) shortcut would lose ~1e-8 sigma_1 here and fail this bound.
  std::mt19937_64 rng(83);
  std::normal_distribution<double> dist(0.0, 1.0);
  const Eigen::Index mn = 300, q = 40;

  Eigen::MatrixXd gauss_u(mn, q), gauss_v(q, q);
  for (Eigen::Index i = 0; i < gauss_u.size(); ++i) gauss_u.data()[i] = dist(rng);
  for (Eigen::Index i = 0; i < gauss_v.size(); ++i) gauss_v.data()[i] = dist(rng);
  const Eigen::MatrixXd U = Eigen::HouseholderQR<Eigen::MatrixXd>(gauss_u)
                                .householderQ() * Eigen::MatrixXd::Identity(mn, q);
  const Eigen::MatrixXd V = Eigen::HouseholderQR<Eigen::MatrixXd>(gauss_v)
                                .householderQ() * Eigen::MatrixXd::Identity(q, q);

  Eigen::VectorXd designed(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    designed(i) = std::pow(10.0, -8.0 * double(i) / double(q - 1));  // 1 .. 1e-8
  }
  const Eigen::MatrixXd H1 = U * designed.asDiagonal() * V.transpose();
  const Eigen::MatrixXd H2 = H1;  // any same-shape partner works here

  DmdOptions opts;
  opts.sv_rel_cutoff = 1e-14;
  DmdInfo info;
  GridShape grid{static_cast<std::size_t>(mn), 1, 0.1, 0.1};
  compute_dmd(H1, H2, 1.0, Eigen::VectorXd::Zero(mn), grid, opts, &info);

  REQUIRE(info.singular_values.size() == q);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) {
    worst = std::max(worst, std::abs(info.singular_values(i) - designed(i)));
  }
  CHECK(worst <= 1e-10 * designed(0));
}
