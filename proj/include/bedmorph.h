/* bedmorph.h - C interface to the bedmorph shared library.
 *
 * Gridded bed-elevation dynamic mode decomposition, eigenvalue
 * classification, and Exner-based attribution of streamwise sediment flux to
 * individual modes, plus a synthetic bedform generator with a
 * finite-difference flux oracle.
 *
 * All objects are opaque handles created and released through this API.
 * Functions return BM_OK on success; on failure they return a status code
 * and leave a human-readable detail string in bm_last_error_message()
 * (thread-local). Output handle parameters are untouched on failure.
 */

#ifndef BEDMORPH_H
#define BEDMORPH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BM_API __declspec(dllexport)
#else
#define BM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bm_status {
  BM_OK = 0,
  BM_ERR_INVALID_ARGUMENT,
  BM_ERR_NON_FINITE_INPUT,
  BM_ERR_INSUFFICIENT_SNAPSHOTS,
  BM_ERR_RANK_DEFICIENT,
  BM_ERR_ZERO_EIGENVALUE,
  BM_ERR_FORMAT_VERSION_MISMATCH,
  BM_ERR_CORRUPT_PAYLOAD,
  BM_ERR_INPUT_NOT_FOUND,
  BM_ERR_TRANSECT_OUT_OF_RANGE,
  BM_ERR_DEGENERATE_RANGE,
  BM_ERR_EXCLUDED_MODE,
  BM_ERR_BOUNDARY_TIME_INDEX,
  BM_ERR_GRID_TOO_COARSE,
  BM_ERR_EMPTY_SPECTRUM,
  BM_ERR_NO_CONTRIBUTING_MODES,
  BM_ERR_ALL_EXCLUDED,
  BM_ERR_ZERO_VARIANCE,
  BM_ERR_DEGENERATE_SAMPLES,
  BM_ERR_SHAPE_MISMATCH,
  BM_ERR_INTERNAL
} bm_status;

/* Stable identifier string for a status code (e.g. "InputNotFound"). */
BM_API const char* bm_status_name(bm_status status);

/* Detail message of the most recent failure on the calling thread. */
BM_API const char* bm_last_error_message(void);

/* ------------------------------------------------------------------ */
/* Elevation fields                                                     */
/* ------------------------------------------------------------------ */

typedef struct bm_field bm_field;

/* Reads a BEDGRID file, or a per-snapshot CSV directory when path is a
 * directory. */
BM_API bm_status bm_field_read(const char* path, bm_field** out);
/* Writes BEDGRID v1. */
BM_API bm_status bm_field_write(const bm_field* field, const char* path);
/* Builds a synthetic field from a scenario JSON document (text, not a
 * path). */
BM_API bm_status bm_field_synthesize(const char* scenario_json, bm_field** out);
BM_API void bm_field_free(bm_field* field);

BM_API bm_status bm_field_dims(const bm_field* field, size_t* nx, size_t* ny, size_t* nt);
BM_API bm_status bm_field_spacing(const bm_field* field, double* dx, double* dy, double* dt);
/* Borrowed pointer to the nx*ny*nt sample block in (t, x, y) order; valid
 * until the field is freed. */
BM_API bm_status bm_field_data(const bm_field* field, const double** values, size_t* count);

/* ------------------------------------------------------------------ */
/* Dynamic mode decomposition                                           */
/* ------------------------------------------------------------------ */

typedef struct bm_model bm_model;
typedef struct bm_dmd_info bm_dmd_info;

#define BM_RANK_FULL (-1)

typedef struct bm_dmd_options {
  double train_fraction;  /* fraction of snapshots forming training pairs */
  int32_t rank;           /* BM_RANK_FULL or an explicit truncation rank  */
  int32_t remove_mean;    /* nonzero: subtract the temporal mean          */
  double sv_rel_cutoff;   /* singular-value cutoff relative to sigma_1    */
  int32_t fit_all_snapshots; /* nonzero: least-squares amplitudes over all
                                training columns instead of the initial
                                snapshot fit */
} bm_dmd_options;

BM_API void bm_dmd_options_init(bm_dmd_options* options);

/* Decomposes the field; info (optional, may be NULL) receives diagnostics
 * and must be freed with bm_dmd_info_free. */
BM_API bm_status bm_dmd_compute(const bm_field* field, const bm_dmd_options* options,
                                bm_model** out, bm_dmd_info** info);
BM_API void bm_model_free(bm_model* model);
BM_API void bm_dmd_info_free(bm_dmd_info* info);

BM_API bm_status bm_dmd_info_train_count(const bm_dmd_info* info, size_t* q);
BM_API bm_status bm_dmd_info_singular_values(const bm_dmd_info* info, double* values,
                                             size_t capacity, size_t* count);

BM_API bm_status bm_model_save(const bm_model* model, const char* path);
BM_API bm_status bm_model_load(const char* path, bm_model** out);

BM_API bm_status bm_model_rank(const bm_model* model, int32_t* rank);
BM_API bm_status bm_model_grid(const bm_model* model, size_t* m, size_t* n);
BM_API bm_status bm_model_sampling(const bm_model* model, double* dt, double* dx, double* dy);
BM_API bm_status bm_model_train_count(const bm_model* model, size_t* q);
/* Per-mode arrays, each of length rank; any output may be NULL. */
BM_API bm_status bm_model_eigenvalues(const bm_model* model, double* re, double* im);
BM_API bm_status bm_model_continuous_eigenvalues(const bm_model* model, double* re, double* im);
BM_API bm_status bm_model_amplitudes(const bm_model* model, double* re, double* im);

/* Reconstruction at time t into a caller buffer of m*n doubles (row-major). */
BM_API bm_status bm_model_reconstruct(const bm_model* model, double t, double* values,
                                      size_t capacity);

/* ------------------------------------------------------------------ */
/* Mode spectrum                                                        */
/* ------------------------------------------------------------------ */

typedef struct bm_mode_table bm_mode_table;

typedef enum bm_persistence {
  BM_PERSISTENCE_DECAYING = 0,
  BM_PERSISTENCE_PERSISTENT = 1,
  BM_PERSISTENCE_GROWING = 2
} bm_persistence;

typedef struct bm_mode_row {
  int32_t index;
  double re_lambda, im_lambda;
  double re_omega, im_omega;
  double period_s;        /* +inf for non-oscillatory modes */
  double power;
  int32_t persistence;    /* bm_persistence */
  double wavelength_m;    /* NaN when undefined */
  double speed_m_per_s;   /* NaN when undefined */
  int32_t pair_index;     /* conjugate partner, -1 when unpaired */
} bm_mode_row;

BM_API bm_status bm_mode_table_compute(const bm_model* model, double persistence_tol,
                                       size_t y_index, bm_mode_table** out);
BM_API void bm_mode_table_free(bm_mode_table* table);
BM_API bm_status bm_mode_table_size(const bm_mode_table* table, size_t* rows);
BM_API bm_status bm_mode_table_row(const bm_mode_table* table, size_t i, bm_mode_row* out);
/* Counts per period region; counts has n_edges+1 entries. Pairs count once,
 * infinite periods land in the last bin. */
BM_API bm_status bm_mode_table_bin(const bm_mode_table* table, const double* edges_s,
                                   size_t n_edges, size_t* counts);
BM_API bm_status bm_mode_table_write_csv(const bm_mode_table* table, const char* path);
BM_API bm_status bm_mode_table_write_json(const bm_mode_table* table, const char* path);

/* ------------------------------------------------------------------ */
/* Exner flux attribution                                               */
/* ------------------------------------------------------------------ */

typedef struct bm_flux_report bm_flux_report;

typedef enum bm_ranking_order {
  BM_ORDER_BY_SPEED_ASCENDING = 0,
  BM_ORDER_BY_SPEED_DESCENDING = 1,
  BM_ORDER_BY_MAGNITUDE = 2
} bm_ranking_order;

typedef struct bm_flux_config {
  double porosity;        /* lambda_p in [0, 1) */
  size_t y_index;         /* transect */
  size_t x_min, x_max;    /* inclusive streamwise index range */
  const double* times;    /* evaluation times, seconds */
  size_t n_times;
  int32_t order;          /* bm_ranking_order */
} bm_flux_config;

BM_API void bm_flux_config_init(bm_flux_config* config);

/* Flux of one mode (conjugate pairs report their combined real value). */
BM_API bm_status bm_modal_flux(const bm_model* model, const bm_mode_table* table,
                               int32_t mode, const bm_flux_config* config, double t,
                               double* out);
/* Net streamwise flux through the transect at time t. */
BM_API bm_status bm_net_flux(const bm_model* model, const bm_mode_table* table,
                             const bm_flux_config* config, double t, double* out);

BM_API bm_status bm_flux_report_compute(const bm_model* model, const bm_mode_table* table,
                                        const bm_flux_config* config, bm_flux_report** out);
BM_API void bm_flux_report_free(bm_flux_report* report);
BM_API bm_status bm_flux_report_size(const bm_flux_report* report, size_t* contributors,
                                     size_t* times);
BM_API bm_status bm_flux_report_net(const bm_flux_report* report, double* values,
                                    size_t capacity);
BM_API bm_status bm_flux_report_cumulative(const bm_flux_report* report, double* percent,
                                           size_t capacity);
BM_API bm_status bm_flux_report_write_json(const bm_flux_report* report,
                                           const bm_mode_table* table, const char* path);
BM_API bm_status bm_flux_report_write_csv(const bm_flux_report* report, const char* path);
BM_API bm_status bm_flux_report_write_plot(const bm_flux_report* report, const char* path);

/* Finite-difference Exner oracle evaluated directly on field data at an
 * interior snapshot index. */
BM_API bm_status bm_oracle_net_flux(const bm_field* field, double porosity, size_t y_index,
                                    size_t x_min, size_t x_max, size_t t_index, double* out);

/* ------------------------------------------------------------------ */
/* Reconstruction metrics                                               */
/* ------------------------------------------------------------------ */

BM_API bm_status bm_metrics_mape(const double* truth, const double* pred, size_t count,
                                 double epsilon, double* percent, size_t* excluded);
BM_API bm_status bm_metrics_pearson(const double* a, const double* b, size_t count,
                                    double* out);

typedef struct bm_metrics_options {
  size_t snapshot;   /* snapshot index for the headline MAPE */
  size_t y_index;    /* transect */
  size_t bins;       /* 0: Freedman-Diaconis with a floor of 16 */
  double epsilon;    /* MAPE near-zero guard, meters */
} bm_metrics_options;

BM_API void bm_metrics_options_init(bm_metrics_options* options);

/* Writes the metrics report JSON (MAPE, pooled correlations, PDFs of the
 * original and reconstructed elevations, optional held-out validation
 * block). */
BM_API bm_status bm_metrics_report_write(const bm_model* model, const bm_field* field,
                                         const bm_metrics_options* options,
                                         const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BEDMORPH_H */
