#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bedmorph.h"
#include "test_helpers.hpp"

namespace {

std::string scenario_text(const char* name) {
  std::ifstream in(std::string(BEDMORPH_SCENARIO_DIR) + "/" + name);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Pipeline {
  bm_field* field = nullptr;
  bm_model* model = nullptr;
  bm_dmd_info* info = nullptr;
  bm_mode_table* table = nullptr;

  explicit Pipeline(const char* scenario, int remove_mean) {
    REQUIRE(bm_field_synthesize(scenario_text(scenario).c_str(), &field) == BM_OK);
    bm_dmd_options options;
    bm_dmd_options_init(&options);
    options.remove_mean = remove_mean;
    REQUIRE(bm_dmd_compute(field, &options, &model, &info) == BM_OK);
    REQUIRE(bm_mode_table_compute(model, 0.01, 0, &table) == BM_OK);
  }
  ~Pipeline() {
    bm_mode_table_free(table);
    bm_dmd_info_free(info);
    bm_model_free(model);
    bm_field_free(field);
  }
};

}  // namespace

TEST_CASE("status names are stable identifiers") {
  CHECK(std::string(bm_status_name(BM_OK)) == "Ok");
  CHECK(std::string(bm_status_name(BM_ERR_INPUT_NOT_FOUND)) == "InputNotFound");
  CHECK(std::string(bm_status_name(BM_ERR_GRID_TOO_COARSE)) == "GridTooCoarse");
  CHECK(std::string(bm_status_name(BM_ERR_RANK_DEFICIENT)) == "RankDeficient");
}

TEST_CASE("field synthesis, IO and accessors") {
  bedmorph::test::ScratchDir dir("capi_field");
  bm_field* field = nullptr;
  REQUIRE(bm_field_synthesize(scenario_text("three_wave.json").c_str(), &field) == BM_OK);

  size_t nx = 0, ny = 0, nt = 0;
  CHECK(bm_field_dims(field, &nx, &ny, &nt) == BM_OK);
  CHECK(nx == 256);
  CHECK(ny == 1);
  CHECK(nt == 200);

  double dx = 0, dy = 0, dt = 0;
  CHECK(bm_field_spacing(field, &dx, &dy, &dt) == BM_OK);
  CHECK(dx == 0.05);
  CHECK(dt == 120.0);

  const double* data = nullptr;
  size_t count = 0;
  CHECK(bm_field_data(field, &data, &count) == BM_OK);
  REQUIRE(data != nullptr);
  CHECK(count == nx * ny * nt);

  const std::string path = (dir / "f.bedgrid").string();
  CHECK(bm_field_write(field, path.c_str()) == BM_OK);
  bm_field* back = nullptr;
  REQUIRE(bm_field_read(path.c_str(), &back) == BM_OK);
  const double* data2 = nullptr;
  size_t count2 = 0;
  CHECK(bm_field_data(back, &data2, &count2) == BM_OK);
  REQUIRE(count2 == count);
  CHECK(std::memcmp(data, data2, count * sizeof(double)) == 0);

  bm_field_free(back);
  bm_field_free(field);
}

TEST_CASE("error paths set status and message") {
  bm_field* field = nullptr;
  CHECK(bm_field_read("/nonexistent/nowhere.bedgrid", &field) == BM_ERR_INPUT_NOT_FOUND);
  CHECK(field == nullptr);
  CHECK(std::strlen(bm_last_error_message()) > 0);

  CHECK(bm_field_synthesize("{ not json", &field) == BM_ERR_CORRUPT_PAYLOAD);
  CHECK(bm_field_read(nullptr, &field) == BM_ERR_INVALID_ARGUMENT);

  // Under-resolved scenario trips the Nyquist guard.
  const std::string coarse = R"({
    "grid": {"nx": 16, "ny": 1, "nt": 8, "dx": 0.5, "dy": 0.5, "dt": 60.0},
    "waves": [{"amplitude": 0.01, "wavelength": 1.0, "period": 600.0}]
  })";
  CHECK(bm_field_synthesize(coarse.c_str(), &field) == BM_ERR_GRID_TOO_COARSE);
}

TEST_CASE("dmd through the C surface recovers the designed spectrum") {
  Pipeline p("three_wave.json", 0);

  int32_t rank = 0;
  CHECK(bm_model_rank(p.model, &rank) == BM_OK);
  CHECK(rank == 7);  // three conjugate pairs plus the retained mean direction

  size_t q = 0;
  CHECK(bm_dmd_info_train_count(p.info, &q) == BM_OK);
  CHECK(q == 196);

  size_t sv_count = 0;
  CHECK(bm_dmd_info_singular_values(p.info, nullptr, 0, &sv_count) == BM_OK);
  CHECK(sv_count == 196);
  std::vector<double> sv(sv_count);
  CHECK(bm_dmd_info_singular_values(p.info, sv.data(), sv.size(), nullptr) == BM_OK);
  CHECK(sv.front() > sv.back());

  std::vector<double> re(static_cast<size_t>(rank)), im(static_cast<size_t>(rank));
  CHECK(bm_model_eigenvalues(p.model, re.data(), im.data()) == BM_OK);
  // The slow persistent wave: period 14400 s at dt = 120 s.
  const std::complex<double> expected = std::polar(1.0, 2.0 * M_PI * 120.0 / 14400.0);
  double best = 1e300;
  for (size_t k = 0; k < re.size(); ++k) {
    best = std::min(best, std::abs(std::complex<double>(re[k], im[k]) - expected));
  }
  CHECK(best <= 1e-10);

  // Reconstruction at t = 0 reproduces the first snapshot.
  size_t nx = 0, ny = 0, nt = 0;
  REQUIRE(bm_field_dims(p.field, &nx, &ny, &nt) == BM_OK);
  std::vector<double> recon(nx * ny);
  REQUIRE(bm_model_reconstruct(p.model, 0.0, recon.data(), recon.size()) == BM_OK);
  const double* data = nullptr;
  size_t count = 0;
  REQUIRE(bm_field_data(p.field, &data, &count) == BM_OK);
  double worst = 0.0;
  for (size_t i = 0; i < recon.size(); ++i) worst = std::max(worst, std::abs(recon[i] - data[i]));
  CHECK(worst <= 1e-8);
}

TEST_CASE("model persistence through the C surface is bit-exact") {
  bedmorph::test::ScratchDir dir("capi_model");
  Pipeline p("three_wave.json", 1);

  const std::string path = (dir / "m.dmdmodel").string();
  REQUIRE(bm_model_save(p.model, path.c_str()) == BM_OK);
  bm_model* back = nullptr;
  REQUIRE(bm_model_load(path.c_str(), &back) == BM_OK);

  int32_t rank = 0, rank2 = 0;
  CHECK(bm_model_rank(p.model, &rank) == BM_OK);
  CHECK(bm_model_rank(back, &rank2) == BM_OK);
  REQUIRE(rank == rank2);

  std::vector<double> a(static_cast<size_t>(rank)), b(static_cast<size_t>(rank));
  std::vector<double> a2(static_cast<size_t>(rank)), b2(static_cast<size_t>(rank));
  CHECK(bm_model_amplitudes(p.model, a.data(), b.data()) == BM_OK);
  CHECK(bm_model_amplitudes(back, a2.data(), b2.data()) == BM_OK);
  CHECK(std::memcmp(a.data(), a2.data(), a.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(b.data(), b2.data(), b.size() * sizeof(double)) == 0);

  bm_model* bad = nullptr;
  CHECK(bm_model_load((dir / "missing.dmdmodel").string().c_str(), &bad) ==
        BM_ERR_INPUT_NOT_FOUND);
  bm_model_free(back);
}

TEST_CASE("mode table rows, regions and files") {
  bedmorph::test::ScratchDir dir("capi_table");
  Pipeline p("three_wave.json", 0);

  size_t rows = 0;
  REQUIRE(bm_mode_table_size(p.table, &rows) == BM_OK);
  REQUIRE(rows == 7);

  size_t decaying = 0, pairs = 0;
  for (size_t i = 0; i < rows; ++i) {
    bm_mode_row row;
    REQUIRE(bm_mode_table_row(p.table, i, &row) == BM_OK);
    if (row.persistence == BM_PERSISTENCE_DECAYING) ++decaying;
    if (row.pair_index >= 0 && row.pair_index > row.index) ++pairs;
  }
  CHECK(decaying == 2);
  CHECK(pairs == 3);

  const double edges[] = {3.9 * 60.0, 6.0 * 60.0, 3600.0};
  size_t counts[4] = {0, 0, 0, 0};
  REQUIRE(bm_mode_table_bin(p.table, edges, 3, counts) == BM_OK);
  CHECK(counts[0] + counts[1] + counts[2] + counts[3] == 4);  // 3 pairs + mean mode

  CHECK(bm_mode_table_write_csv(p.table, (dir / "spectrum.csv").string().c_str()) == BM_OK);
  CHECK(bm_mode_table_write_json(p.table, (dir / "spectrum.json").string().c_str()) == BM_OK);
  CHECK(std::filesystem::file_size(dir / "spectrum.csv") > 0);

  bm_mode_row row;
  CHECK(bm_mode_table_row(p.table, rows + 5, &row) == BM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("flux attribution through the C surface") {
  bedmorph::test::ScratchDir dir("capi_flux");
  Pipeline p("two_wave.json", 0);

  size_t nx = 0, ny = 0, nt = 0;
  REQUIRE(bm_field_dims(p.field, &nx, &ny, &nt) == BM_OK);
  double dt = 0;
  REQUIRE(bm_field_spacing(p.field, nullptr, nullptr, &dt) == BM_OK);

  std::vector<double> times;
  for (size_t j = 1; j + 1 < nt; ++j) times.push_back(double(j) * dt);

  bm_flux_config cfg;
  bm_flux_config_init(&cfg);
  cfg.porosity = 0.4;
  cfg.x_min = 0;
  cfg.x_max = nx - 1;
  cfg.times = times.data();
  cfg.n_times = times.size();
  cfg.order = BM_ORDER_BY_SPEED_ASCENDING;

  // Net flux against the data-side oracle at one interior snapshot.
  double net = 0.0, oracle = 0.0;
  REQUIRE(bm_net_flux(p.model, p.table, &cfg, times[50], &net) == BM_OK);
  REQUIRE(bm_oracle_net_flux(p.field, 0.4, 0, 0, nx - 1, 51, &oracle) == BM_OK);
  CHECK(std::abs(net - oracle) <= 1e-3 * std::abs(oracle));

  bm_flux_report* report = nullptr;
  REQUIRE(bm_flux_report_compute(p.model, p.table, &cfg, &report) == BM_OK);
  size_t contributors = 0, time_count = 0;
  REQUIRE(bm_flux_report_size(report, &contributors, &time_count) == BM_OK);
  CHECK(time_count == times.size());
  REQUIRE(contributors >= 2);

  std::vector<double> cumulative(contributors);
  REQUIRE(bm_flux_report_cumulative(report, cumulative.data(), cumulative.size()) == BM_OK);
  CHECK(cumulative.front() == doctest::Approx(75.0).epsilon(0.03));
  CHECK(cumulative.back() == 100.0);

  std::vector<double> net_series(time_count);
  REQUIRE(bm_flux_report_net(report, net_series.data(), net_series.size()) == BM_OK);
  CHECK(net_series[50] == net);

  CHECK(bm_flux_report_write_json(report, p.table, (dir / "flux.json").string().c_str()) == BM_OK);
  CHECK(bm_flux_report_write_csv(report, (dir / "ts.csv").string().c_str()) == BM_OK);
  CHECK(bm_flux_report_write_plot(report, (dir / "cum.dat").string().c_str()) == BM_OK);
  bm_flux_report_free(report);
}

TEST_CASE("metrics through the C surface") {
  bedmorph::test::ScratchDir dir("capi_metrics");
  const std::vector<double> truth = {1.0, 2.0, 3.0};
  const std::vector<double> pred = {1.1, 1.8, 3.3};
  double percent = 0.0;
  size_t excluded = 7;
  REQUIRE(bm_metrics_mape(truth.data(), pred.data(), 3, 1e-9, &percent, &excluded) == BM_OK);
  CHECK(percent == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(excluded == 0);

  double r = 0.0;
  REQUIRE(bm_metrics_pearson(truth.data(), truth.data(), 3, &r) == BM_OK);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-12));

  Pipeline p("three_wave.json", 0);
  bm_metrics_options options;
  bm_metrics_options_init(&options);
  options.snapshot = 100;
  const std::string path = (dir / "metrics.json").string();
  REQUIRE(bm_metrics_report_write(p.model, p.field, &options, path.c_str()) == BM_OK);
  CHECK(std::filesystem::file_size(path) > 0);
}
