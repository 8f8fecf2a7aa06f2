#include "bedmorph.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "bedmorph/bedgrid_io.hpp"
#include "bedmorph/dmd.hpp"
#include "bedmorph/elevation_field.hpp"
#include "bedmorph/errors.hpp"
#include "bedmorph/flux.hpp"
#include "bedmorph/metrics.hpp"
#include "bedmorph/model_io.hpp"
#include "bedmorph/spectrum.hpp"
#include "bedmorph/synth.hpp"

using bedmorph::Error;
using bedmorph::ErrorCode;

struct bm_field {
  bedmorph::ElevationField field;
};

struct bm_model {
  bedmorph::DmdModel model;
};

struct bm_dmd_info {
  bedmorph::DmdInfo info;
};

struct bm_mode_table {
  std::vector<bedmorph::ModeSummary> summaries;
};

struct bm_flux_report {
  bedmorph::FluxReport report;
};

namespace {

thread_local std::string g_last_error;

bm_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return BM_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonFiniteInput: return BM_ERR_NON_FINITE_INPUT;
    case ErrorCode::InsufficientSnapshots: return BM_ERR_INSUFFICIENT_SNAPSHOTS;
    case ErrorCode::RankDeficient: return BM_ERR_RANK_DEFICIENT;
    case ErrorCode::ZeroEigenvalue: return BM_ERR_ZERO_EIGENVALUE;
    case ErrorCode::FormatVersionMismatch: return BM_ERR_FORMAT_VERSION_MISMATCH;
    case ErrorCode::CorruptPayload: return BM_ERR_CORRUPT_PAYLOAD;
    case ErrorCode::InputNotFound: return BM_ERR_INPUT_NOT_FOUND;
    case ErrorCode::TransectOutOfRange: return BM_ERR_TRANSECT_OUT_OF_RANGE;
    case ErrorCode::DegenerateRange: return BM_ERR_DEGENERATE_RANGE;
    case ErrorCode::ExcludedMode: return BM_ERR_EXCLUDED_MODE;
    case ErrorCode::BoundaryTimeIndex: return BM_ERR_BOUNDARY_TIME_INDEX;
    case ErrorCode::GridTooCoarse: return BM_ERR_GRID_TOO_COARSE;
    case ErrorCode::EmptySpectrum: return BM_ERR_EMPTY_SPECTRUM;
    case ErrorCode::NoContributingModes: return BM_ERR_NO_CONTRIBUTING_MODES;
    case ErrorCode::AllExcluded: return BM_ERR_ALL_EXCLUDED;
    case ErrorCode::ZeroVariance: return BM_ERR_ZERO_VARIANCE;
    case ErrorCode::DegenerateSamples: return BM_ERR_DEGENERATE_SAMPLES;
    case ErrorCode::ShapeMismatch: return BM_ERR_SHAPE_MISMATCH;
  }
  return BM_ERR_INTERNAL;
}

/// Runs fn, translating exceptions into status codes + last-error text.
template <typename Fn>
bm_status guarded(Fn&& fn) {
  try {
    fn();
    return BM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BM_ERR_INTERNAL;
  }
}

bm_status require(bool ok, const char* what) {
  if (ok) return BM_OK;
  g_last_error = what;
  return BM_ERR_INVALID_ARGUMENT;
}

bedmorph::FluxConfig to_core(const bm_flux_config& c) {
  bedmorph::FluxConfig cfg;
  cfg.porosity = c.porosity;
  cfg.y_index = c.y_index;
  cfg.x_min = c.x_min;
  cfg.x_max = c.x_max;
  if (c.times && c.n_times > 0) cfg.times.assign(c.times, c.times + c.n_times);
  return cfg;
}

bedmorph::RankingOrder to_core(int32_t order) {
  switch (order) {
    case BM_ORDER_BY_SPEED_ASCENDING: return bedmorph::RankingOrder::BySpeedAscending;
    case BM_ORDER_BY_SPEED_DESCENDING: return bedmorph::RankingOrder::BySpeedDescending;
    case BM_ORDER_BY_MAGNITUDE: return bedmorph::RankingOrder::ByMagnitude;
  }
  bedmorph::raise(ErrorCode::InvalidArgument, "unknown ranking order " + std::to_string(order));
}

bm_status copy_complex(const Eigen::VectorXcd& v, double* re, double* im) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (re) re[k] = v(k).real();
    if (im) im[k] = v(k).imag();
  }
  return BM_OK;
}

}  // namespace

extern "C" {

const char* bm_status_name(bm_status status) {
  switch (status) {
    case BM_OK: return "Ok";
    case BM_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case BM_ERR_NON_FINITE_INPUT: return "NonFiniteInput";
    case BM_ERR_INSUFFICIENT_SNAPSHOTS: return "InsufficientSnapshots";
    case BM_ERR_RANK_DEFICIENT: return "RankDeficient";
    case BM_ERR_ZERO_EIGENVALUE: return "ZeroEigenvalue";
    case BM_ERR_FORMAT_VERSION_MISMATCH: return "FormatVersionMismatch";
    case BM_ERR_CORRUPT_PAYLOAD: return "CorruptPayload";
    case BM_ERR_INPUT_NOT_FOUND: return "InputNotFound";
    case BM_ERR_TRANSECT_OUT_OF_RANGE: return "TransectOutOfRange";
    case BM_ERR_DEGENERATE_RANGE: return "DegenerateRange";
    case BM_ERR_EXCLUDED_MODE: return "ExcludedMode";
    case BM_ERR_BOUNDARY_TIME_INDEX: return "BoundaryTimeIndex";
    case BM_ERR_GRID_TOO_COARSE: return "GridTooCoarse";
    case BM_ERR_EMPTY_SPECTRUM: return "EmptySpectrum";
    case BM_ERR_NO_CONTRIBUTING_MODES: return "NoContributingModes";
    case BM_ERR_ALL_EXCLUDED: return "AllExcluded";
    case BM_ERR_ZERO_VARIANCE: return "ZeroVariance";
    case BM_ERR_DEGENERATE_SAMPLES: return "DegenerateSamples";
    case BM_ERR_SHAPE_MISMATCH: return "ShapeMismatch";
    case BM_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* bm_last_error_message(void) { return g_last_error.c_str(); }

/* ----------------------------- fields ----------------------------- */

bm_status bm_field_read(const char* path, bm_field** out) {
  if (auto s = require(path && out, "path and out must be non-null")) return s;
  return guarded([&] {
    auto handle = std::make_unique<bm_field>();
    handle->field = bedmorph::read_field(path);
    *out = handle.release();
  });
}

bm_status bm_field_write(const bm_field* field, const char* path) {
  if (auto s = require(field && path, "field and path must be non-null")) return s;
  return guarded([&] { bedmorph::write_bedgrid(field->field, path); });
}

bm_status bm_field_synthesize(const char* scenario_json, bm_field** out) {
  if (auto s = require(scenario_json && out, "scenario and out must be non-null")) return s;
  return guarded([&] {
    auto handle = std::make_unique<bm_field>();
    handle->field = bedmorph::generate(bedmorph::parse_scenario(scenario_json));
    *out = handle.release();
  });
}

void bm_field_free(bm_field* field) { delete field; }

bm_status bm_field_dims(const bm_field* field, size_t* nx, size_t* ny, size_t* nt) {
  if (auto s = require(field != nullptr, "field must be non-null")) return s;
  if (nx) *nx = field->field.nx;
  if (ny) *ny = field->field.ny;
  if (nt) *nt = field->field.nt;
  return BM_OK;
}

bm_status bm_field_spacing(const bm_field* field, double* dx, double* dy, double* dt) {
  if (auto s = require(field != nullptr, "field must be non-null")) return s;
  if (dx) *dx = field->field.dx;
  if (dy) *dy = field->field.dy;
  if (dt) *dt = field->field.dt;
  return BM_OK;
}

bm_status bm_field_data(const bm_field* field, const double** values, size_t* count) {
  if (auto s = require(field && values, "field and values must be non-null")) return s;
  *values = field->field.values.data();
  if (count) *count = field->field.values.size();
  return BM_OK;
}

/* ------------------------------ DMD ------------------------------- */

void bm_dmd_options_init(bm_dmd_options* options) {
  if (!options) return;
  options->train_fraction = 0.98;
  options->rank = BM_RANK_FULL;
  options->remove_mean = 1;
  options->sv_rel_cutoff = 1e-12;
  options->fit_all_snapshots = 0;
}

bm_status bm_dmd_compute(const bm_field* field, const bm_dmd_options* options,
                         bm_model** out, bm_dmd_info** info) {
  if (auto s = require(field && options && out, "field, options and out must be non-null"))
    return s;
  return guarded([&] {
    bedmorph::DmdOptions opts;
    opts.rank = options->rank;
    opts.sv_rel_cutoff = options->sv_rel_cutoff;
    opts.amplitude_method = options->fit_all_snapshots
                                ? bedmorph::AmplitudeMethod::LeastSquaresAllSnapshots
                                : bedmorph::AmplitudeMethod::InitialSnapshot;
    bedmorph::DmdInfo core_info;
    auto handle = std::make_unique<bm_model>();
    handle->model = bedmorph::dmd_from_field(field->field, options->train_fraction,
                                             options->remove_mean != 0, opts,
                                             info ? &core_info : nullptr);
    if (info) {
      auto ih = std::make_unique<bm_dmd_info>();
      ih->info = std::move(core_info);
      *info = ih.release();
    }
    *out = handle.release();
  });
}

void bm_model_free(bm_model* model) { delete model; }
void bm_dmd_info_free(bm_dmd_info* info) { delete info; }

bm_status bm_dmd_info_train_count(const bm_dmd_info* info, size_t* q) {
  if (auto s = require(info && q, "info and q must be non-null")) return s;
  *q = info->info.q;
  return BM_OK;
}

bm_status bm_dmd_info_singular_values(const bm_dmd_info* info, double* values,
                                      size_t capacity, size_t* count) {
  if (auto s = require(info != nullptr, "info must be non-null")) return s;
  const auto n = static_cast<size_t>(info->info.singular_values.size());
  if (count) *count = n;
  if (values) {
    const size_t m = std::min(capacity, n);
    std::memcpy(values, info->info.singular_values.data(), m * sizeof(double));
  }
  return BM_OK;
}

bm_status bm_model_save(const bm_model* model, const char* path) {
  if (auto s = require(model && path, "model and path must be non-null")) return s;
  return guarded([&] { bedmorph::save_model(model->model, path); });
}

bm_status bm_model_load(const char* path, bm_model** out) {
  if (auto s = require(path && out, "path and out must be non-null")) return s;
  return guarded([&] {
    auto handle = std::make_unique<bm_model>();
    handle->model = bedmorph::load_model(path);
    *out = handle.release();
  });
}

bm_status bm_model_rank(const bm_model* model, int32_t* rank) {
  if (auto s = require(model && rank, "model and rank must be non-null")) return s;
  *rank = model->model.rank;
  return BM_OK;
}

bm_status bm_model_grid(const bm_model* model, size_t* m, size_t* n) {
  if (auto s = require(model != nullptr, "model must be non-null")) return s;
  if (m) *m = model->model.grid_m;
  if (n) *n = model->model.grid_n;
  return BM_OK;
}

bm_status bm_model_sampling(const bm_model* model, double* dt, double* dx, double* dy) {
  if (auto s = require(model != nullptr, "model must be non-null")) return s;
  if (dt) *dt = model->model.dt;
  if (dx) *dx = model->model.dx;
  if (dy) *dy = model->model.dy;
  return BM_OK;
}

bm_status bm_model_train_count(const bm_model* model, size_t* q) {
  if (auto s = require(model && q, "model and q must be non-null")) return s;
  *q = model->model.train_count;
  return BM_OK;
}

bm_status bm_model_eigenvalues(const bm_model* model, double* re, double* im) {
  if (auto s = require(model != nullptr, "model must be non-null")) return s;
  return copy_complex(model->model.discrete_eigs, re, im);
}

bm_status bm_model_continuous_eigenvalues(const bm_model* model, double* re, double* im) {
  if (auto s = require(model != nullptr, "model must be non-null")) return s;
  return copy_complex(model->model.continuous_eigs, re, im);
}

bm_status bm_model_amplitudes(const bm_model* model, double* re, double* im) {
  if (auto s = require(model != nullptr, "model must be non-null")) return s;
  return copy_complex(model->model.amplitudes, re, im);
}

bm_status bm_model_reconstruct(const bm_model* model, double t, double* values,
                               size_t capacity) {
  if (auto s = require(model && values, "model and values must be non-null")) return s;
  if (auto s = require(capacity >= model->model.state_size(), "buffer too small")) return s;
  return guarded([&] {
    const Eigen::VectorXd v = bedmorph::reconstruct_vec(model->model, t);
    std::memcpy(values, v.data(), static_cast<size_t>(v.size()) * sizeof(double));
  });
}

/* ---------------------------- spectrum ---------------------------- */

bm_status bm_mode_table_compute(const bm_model* model, double persistence_tol,
                                size_t y_index, bm_mode_table** out) {
  if (auto s = require(model && out, "model and out must be non-null")) return s;
  return guarded([&] {
    bedmorph::SpectrumOptions options;
    options.persistence_tol = persistence_tol;
    options.y_index = y_index;
    auto handle = std::make_unique<bm_mode_table>();
    handle->summaries = bedmorph::summarize_modes(model->model, options);
    *out = handle.release();
  });
}

void bm_mode_table_free(bm_mode_table* table) { delete table; }

bm_status bm_mode_table_size(const bm_mode_table* table, size_t* rows) {
  if (auto s = require(table && rows, "table and rows must be non-null")) return s;
  *rows = table->summaries.size();
  return BM_OK;
}

bm_status bm_mode_table_row(const bm_mode_table* table, size_t i, bm_mode_row* out) {
  if (auto s = require(table && out, "table and out must be non-null")) return s;
  if (auto s = require(i < table->summaries.size(), "row index out of range")) return s;
  const bedmorph::ModeSummary& m = table->summaries[i];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->index = m.index;
  out->re_lambda = m.eigenvalue.real();
  out->im_lambda = m.eigenvalue.imag();
  out->re_omega = m.omega.real();
  out->im_omega = m.omega.imag();
  out->period_s = m.period_s;
  out->power = m.power;
  out->persistence = static_cast<int32_t>(m.persistence);
  out->wavelength_m = m.wavelength_m.value_or(nan);
  out->speed_m_per_s = m.speed_m_per_s.value_or(nan);
  out->pair_index = m.pair_index;
  return BM_OK;
}

bm_status bm_mode_table_bin(const bm_mode_table* table, const double* edges_s,
                            size_t n_edges, size_t* counts) {
  if (auto s = require(table && edges_s && counts, "table, edges and counts must be non-null"))
    return s;
  return guarded([&] {
    const std::vector<double> edges(edges_s, edges_s + n_edges);
    const auto bins = bedmorph::bin_spectrum(table->summaries, edges);
    std::copy(bins.begin(), bins.end(), counts);
  });
}

bm_status bm_mode_table_write_csv(const bm_mode_table* table, const char* path) {
  if (auto s = require(table && path, "table and path must be non-null")) return s;
  return guarded([&] { bedmorph::write_mode_table_csv(table->summaries, path); });
}

bm_status bm_mode_table_write_json(const bm_mode_table* table, const char* path) {
  if (auto s = require(table && path, "table and path must be non-null")) return s;
  return guarded([&] { bedmorph::write_mode_table_json(table->summaries, path); });
}

/* ------------------------------ flux ------------------------------ */

void bm_flux_config_init(bm_flux_config* config) {
  if (!config) return;
  config->porosity = 0.4;
  config->y_index = 0;
  config->x_min = 0;
  config->x_max = 0;
  config->times = nullptr;
  config->n_times = 0;
  config->order = BM_ORDER_BY_SPEED_ASCENDING;
}

bm_status bm_modal_flux(const bm_model* model, const bm_mode_table* table, int32_t mode,
                        const bm_flux_config* config, double t, double* out) {
  if (auto s = require(model && table && config && out, "null argument")) return s;
  return guarded([&] {
    *out = bedmorph::modal_flux(model->model, table->summaries, mode, to_core(*config), t);
  });
}

bm_status bm_net_flux(const bm_model* model, const bm_mode_table* table,
                      const bm_flux_config* config, double t, double* out) {
  if (auto s = require(model && table && config && out, "null argument")) return s;
  return guarded([&] {
    *out = bedmorph::net_flux(model->model, table->summaries, to_core(*config), t);
  });
}

bm_status bm_flux_report_compute(const bm_model* model, const bm_mode_table* table,
                                 const bm_flux_config* config, bm_flux_report** out) {
  if (auto s = require(model && table && config && out, "null argument")) return s;
  return guarded([&] {
    auto handle = std::make_unique<bm_flux_report>();
    handle->report = bedmorph::cumulative_contribution(model->model, table->summaries,
                                                       to_core(*config), to_core(config->order));
    *out = handle.release();
  });
}

void bm_flux_report_free(bm_flux_report* report) { delete report; }

bm_status bm_flux_report_size(const bm_flux_report* report, size_t* contributors,
                              size_t* times) {
  if (auto s = require(report != nullptr, "report must be non-null")) return s;
  if (contributors) *contributors = report->report.contributors.size();
  if (times) *times = static_cast<size_t>(report->report.net.size());
  return BM_OK;
}

bm_status bm_flux_report_net(const bm_flux_report* report, double* values, size_t capacity) {
  if (auto s = require(report && values, "report and values must be non-null")) return s;
  const auto n = static_cast<size_t>(report->report.net.size());
  if (auto s = require(capacity >= n, "buffer too small")) return s;
  std::memcpy(values, report->report.net.data(), n * sizeof(double));
  return BM_OK;
}

bm_status bm_flux_report_cumulative(const bm_flux_report* report, double* percent,
                                    size_t capacity) {
  if (auto s = require(report && percent, "report and percent must be non-null")) return s;
  const size_t n = report->report.cumulative_percent.size();
  if (auto s = require(capacity >= n, "buffer too small")) return s;
  std::memcpy(percent, report->report.cumulative_percent.data(), n * sizeof(double));
  return BM_OK;
}

bm_status bm_flux_report_write_json(const bm_flux_report* report, const bm_mode_table* table,
                                    const char* path) {
  if (auto s = require(report && table && path, "null argument")) return s;
  return guarded([&] { bedmorph::write_flux_json(report->report, table->summaries, path); });
}

bm_status bm_flux_report_write_csv(const bm_flux_report* report, const char* path) {
  if (auto s = require(report && path, "report and path must be non-null")) return s;
  return guarded([&] { bedmorph::write_flux_timeseries_csv(report->report, path); });
}

bm_status bm_flux_report_write_plot(const bm_flux_report* report, const char* path) {
  if (auto s = require(report && path, "report and path must be non-null")) return s;
  return guarded([&] { bedmorph::write_cumulative_plot(report->report, path); });
}

bm_status bm_oracle_net_flux(const bm_field* field, double porosity, size_t y_index,
                             size_t x_min, size_t x_max, size_t t_index, double* out) {
  if (auto s = require(field && out, "field and out must be non-null")) return s;
  return guarded([&] {
    *out = bedmorph::oracle_net_flux(field->field, porosity, y_index, x_min, x_max, t_index);
  });
}

/* ----------------------------- metrics ---------------------------- */

bm_status bm_metrics_mape(const double* truth, const double* pred, size_t count,
                          double epsilon, double* percent, size_t* excluded) {
  if (auto s = require(truth && pred && percent, "null argument")) return s;
  return guarded([&] {
    const auto r = bedmorph::mape({truth, count}, {pred, count}, epsilon);
    *percent = r.percent;
    if (excluded) *excluded = r.excluded;
  });
}

bm_status bm_metrics_pearson(const double* a, const double* b, size_t count, double* out) {
  if (auto s = require(a && b && out, "null argument")) return s;
  return guarded([&] { *out = bedmorph::pearson({a, count}, {b, count}); });
}

void bm_metrics_options_init(bm_metrics_options* options) {
  if (!options) return;
  options->snapshot = 0;
  options->y_index = 0;
  options->bins = 0;
  options->epsilon = 1e-6;
}

bm_status bm_metrics_report_write(const bm_model* model, const bm_field* field,
                                  const bm_metrics_options* options, const char* path) {
  if (auto s = require(model && field && options && path, "null argument")) return s;
  return guarded([&] {
    bedmorph::MetricsReportOptions core;
    core.snapshot = options->snapshot;
    core.y_index = options->y_index;
    core.bins = options->bins;
    core.epsilon = options->epsilon;
    bedmorph::write_metrics_report(model->model, field->field, core, path);
  });
}

} /* extern "C" */
