#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bedmorph {

struct MapeResult {
  double percent = 0.0;
  std::size_t excluded = 0;  // entries with |truth| < epsilon, skipped
};

/// 100 * mean(|pred - truth| / |truth|) over entries with |truth| >= epsilon.
/// Throws AllExcluded when nothing survives the guard.
MapeResult mape(std::span<const double> truth, std::span<const double> pred,
                double epsilon = 1e-6);

/// Product-moment correlation; throws ZeroVariance when either input is
/// constant.
double pearson(std::span<const double> a, std::span<const double> b);

/// Normalized histogram density over [min, max] with equal-width bins;
/// sum(density_i * width_i) == 1.
struct PdfEstimate {
  std::vector<double> bin_edges;  // bins + 1 entries, meters
  std::vector<double> densities;  // 1/meters
};

PdfEstimate pdf_estimate(std::span<const double> samples, std::size_t bins);

/// Freedman-Diaconis bin count with a floor (default 16); falls back to the
/// floor when the IQR degenerates.
std::size_t freedman_diaconis_bins(std::span<const double> samples,
                                   std::size_t floor_bins = 16);

struct DmdModel;
struct ElevationField;

struct MetricsReportOptions {
  std::size_t snapshot = 0;  // snapshot index for the headline MAPE
  std::size_t y_index = 0;   // transect
  std::size_t bins = 0;      // 0: Freedman-Diaconis with a floor of 16
  double epsilon = 1e-6;     // MAPE near-zero guard, meters
};

/// Reconstruction-quality report JSON: headline MAPE at the chosen snapshot
/// and transect, pooled correlations (transect and full field), PDFs of
/// original vs reconstructed elevations, and a held-out validation block
/// when the model was trained on fewer snapshots than the field holds.
/// Throws ShapeMismatch when model and field grids disagree.
void write_metrics_report(const DmdModel& model, const ElevationField& field,
                          const MetricsReportOptions& options, const std::string& path);

}  // namespace bedmorph
