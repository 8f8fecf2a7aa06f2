#include "bedmorph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bedmorph/errors.hpp"

namespace bedmorph {

MapeResult mape(std::span<const double> truth, std::span<const double> pred, double epsilon) {
  if (truth.size() != pred.size()) {
    raise(ErrorCode::ShapeMismatch, "mape inputs differ in length");
  }
  if (!(epsilon >= 0.0)) raise(ErrorCode::InvalidArgument, "epsilon must be >= 0");

  MapeResult result;
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (std::abs(truth[i]) < epsilon) {
      ++result.excluded;
      continue;
    }
    acc += std::abs(pred[i] - truth[i]) / std::abs(truth[i]);
    ++used;
  }
  if (used == 0) {
    raise(ErrorCode::AllExcluded, "every entry fell below the near-zero guard");
  }
  result.percent = 100.0 * acc / static_cast<double>(used);
  return result;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) raise(ErrorCode::ShapeMismatch, "pearson inputs differ in length");
  if (a.size() < 2) raise(ErrorCode::InvalidArgument, "pearson needs at least two samples");

  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    raise(ErrorCode::ZeroVariance, "correlation undefined for constant input");
  }
  return cov / std::sqrt(var_a * var_b);
}

PdfEstimate pdf_estimate(std::span<const double> samples, std::size_t bins) {
  if (bins < 2) raise(ErrorCode::InvalidArgument, "need at least 2 bins");
  if (samples.size() < 2) raise(ErrorCode::InvalidArgument, "need at least 2 samples");

  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) raise(ErrorCode::DegenerateSamples, "all samples identical");

  PdfEstimate pdf;
  pdf.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) {
    pdf.bin_edges[b] = lo + width * static_cast<double>(b);
  }
  pdf.bin_edges.back() = hi;

  std::vector<std::size_t> counts(bins, 0);
  for (double v : samples) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;  // right edge closes the last bin
    ++counts[b];
  }

  pdf.densities.resize(bins);
  const double norm = 1.0 / (static_cast<double>(samples.size()) * width);
  for (std::size_t b = 0; b < bins; ++b) {
    pdf.densities[b] = static_cast<double>(counts[b]) * norm;
  }
  return pdf;
}

std::size_t freedman_diaconis_bins(std::span<const double> samples, std::size_t floor_bins) {
  if (samples.size() < 2) return floor_bins;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double f) {
    const double pos = f * static_cast<double>(sorted.size() - 1);
    const auto idx = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(idx);
    if (idx + 1 >= sorted.size()) return sorted.back();
    return sorted[idx] * (1.0 - frac) + sorted[idx + 1] * frac;
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double range = sorted.back() - sorted.front();
  if (iqr <= 0.0 || range <= 0.0) return floor_bins;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  const auto bins = static_cast<std::size_t>(std::ceil(range / width));
  return std::max(bins, floor_bins);
}

}  // namespace bedmorph
