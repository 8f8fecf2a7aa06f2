#include <string>
#include <vector>

#include "bedmorph/dmd.hpp"
#include "bedmorph/elevation_field.hpp"
#include "bedmorph/errors.hpp"
#include "bedmorph/metrics.hpp"
#include "bedmorph/detail/json_writer.hpp"

namespace bedmorph {

namespace {

void append_pdf(detail::JsonWriter& w, const char* key, const PdfEstimate& pdf) {
  w.key(key);
  w.begin_object();
  w.key("edges");
  w.begin_array();
  for (double e : pdf.bin_edges) w.value(e);
  w.end_array();
  w.key("densities");
  w.begin_array();
  for (double d : pdf.densities) w.value(d);
  w.end_array();
  w.end_object();
}

}  // namespace

void write_metrics_report(const DmdModel& model, const ElevationField& field,
                          const MetricsReportOptions& options, const std::string& path) {
  if (model.grid_m != field.nx || model.grid_n != field.ny) {
    raise(ErrorCode::ShapeMismatch,
          "model grid " + std::to_string(model.grid_m) + "x" + std::to_string(model.grid_n) +
              " does not match field " + std::to_string(field.nx) + "x" +
              std::to_string(field.ny));
  }
  if (options.snapshot >= field.nt) {
    raise(ErrorCode::InvalidArgument, "snapshot index out of range");
  }
  if (options.y_index >= field.ny) {
    raise(ErrorCode::TransectOutOfRange, "transect outside spanwise range");
  }

  // Reconstruct once per snapshot; reused by every statistic below.
  std::vector<Eigen::VectorXd> reconstructed(field.nt);
  for (std::size_t t = 0; t < field.nt; ++t) {
    reconstructed[t] = reconstruct_vec(model, field.time_of(t));
  }

  const std::size_t mn = field.plane_size();
  auto flat = [&](std::size_t i, std::size_t t) { return i * field.ny + options.y_index + t * mn; };

  // Headline MAPE over the chosen snapshot's transect profile.
  std::vector<double> truth_profile(field.nx), pred_profile(field.nx);
  for (std::size_t i = 0; i < field.nx; ++i) {
    truth_profile[i] = field.values[flat(i, options.snapshot)];
    pred_profile[i] =
        reconstructed[options.snapshot](static_cast<Eigen::Index>(i * field.ny + options.y_index));
  }
  const MapeResult headline = mape(truth_profile, pred_profile, options.epsilon);

  // Pooled samples: all (x, t) points at the transect, and the full field.
  std::vector<double> truth_transect, pred_transect;
  truth_transect.reserve(field.nx * field.nt);
  pred_transect.reserve(field.nx * field.nt);
  for (std::size_t t = 0; t < field.nt; ++t) {
    for (std::size_t i = 0; i < field.nx; ++i) {
      truth_transect.push_back(field.values[flat(i, t)]);
      pred_transect.push_back(
          reconstructed[t](static_cast<Eigen::Index>(i * field.ny + options.y_index)));
    }
  }
  const double pearson_transect = pearson(truth_transect, pred_transect);

  std::vector<double> pred_full;
  pred_full.reserve(field.sample_count());
  for (std::size_t t = 0; t < field.nt; ++t) {
    for (Eigen::Index idx = 0; idx < reconstructed[t].size(); ++idx) {
      pred_full.push_back(reconstructed[t](idx));
    }
  }
  const double pearson_full = pearson(field.values, pred_full);

  const std::size_t bins =
      options.bins > 0 ? options.bins : freedman_diaconis_bins(truth_transect);
  const PdfEstimate pdf_truth = pdf_estimate(truth_transect, bins);
  const PdfEstimate pdf_pred = pdf_estimate(pred_transect, bins);

  detail::JsonWriter w;
  w.begin_object();
  w.kv("mape_percent", headline.percent);
  w.kv("excluded_count", headline.excluded);
  w.kv("pearson", pearson_transect);
  w.kv("pearson_full_field", pearson_full);
  w.kv("snapshot", options.snapshot);
  w.kv("transect", options.y_index);
  w.kv("mape_epsilon", options.epsilon);
  w.key("pdf");
  w.begin_object();
  append_pdf(w, "original", pdf_truth);
  append_pdf(w, "reconstructed", pdf_pred);
  w.end_object();

  // Snapshots past the training window act as a validation set when present.
  const std::size_t first_heldout = model.train_count + 1;
  if (first_heldout < field.nt) {
    std::vector<double> truth_val, pred_val;
    for (std::size_t t = first_heldout; t < field.nt; ++t) {
      for (std::size_t i = 0; i < field.nx; ++i) {
        truth_val.push_back(field.values[flat(i, t)]);
        pred_val.push_back(
            reconstructed[t](static_cast<Eigen::Index>(i * field.ny + options.y_index)));
      }
    }
    const MapeResult val_mape = mape(truth_val, pred_val, options.epsilon);
    w.key("validation");
    w.begin_object();
    w.kv("held_out_snapshots", field.nt - first_heldout);
    w.kv("mape_percent", val_mape.percent);
    w.kv("excluded_count", val_mape.excluded);
    w.kv("pearson", pearson(truth_val, pred_val));
    w.end_object();
  }

  // Values reported for the original flume dataset, carried for comparison
  // only; nothing asserts against them.
  w.key("reference");
  w.begin_object();
  w.kv("mape_percent", 11.97);
  w.kv("pearson", 0.9);
  w.kv("note", "published flume-dataset values for orientation; not a target");
  w.end_object();

  w.end_object();
  detail::write_text_file(path, w.str() + "\n");
}

}  // namespace bedmorph
