// bedmorph - bed-elevation mode decomposition and sediment-flux attribution.
//
// Pipeline: synth -> decompose -> flux / report, with file-based handoff so
// every stage is independently runnable and reproducible. The tool speaks to
// the bedmorph shared library exclusively through its C API (bedmorph.h).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bedmorph.h"
#include "bedmorph/detail/json_writer.hpp"
#include "json_schema.hpp"
#include "schemas.hpp"

namespace fs = std::filesystem;
using bedmorph::detail::JsonWriter;
using nlohmann::json;

namespace {

struct CliError {
  int exit_code;
  std::string kind;
  std::string message;
};

int exit_code_for(bm_status status) {
  switch (status) {
    case BM_OK:
      return 0;
    case BM_ERR_INVALID_ARGUMENT:
    case BM_ERR_GRID_TOO_COARSE:
    case BM_ERR_TRANSECT_OUT_OF_RANGE:
    case BM_ERR_DEGENERATE_RANGE:
    case BM_ERR_BOUNDARY_TIME_INDEX:
    case BM_ERR_SHAPE_MISMATCH:
      return 2;
    case BM_ERR_INPUT_NOT_FOUND:
    case BM_ERR_CORRUPT_PAYLOAD:
    case BM_ERR_FORMAT_VERSION_MISMATCH:
      return 3;
    default:
      return 4;
  }
}

void check(bm_status status) {
  if (status == BM_OK) return;
  throw CliError{exit_code_for(status), bm_status_name(status), bm_last_error_message()};
}

[[noreturn]] void config_error(const std::string& message) {
  throw CliError{2, "InvalidArgument", message};
}

[[noreturn]] void io_error(const std::string& message) {
  throw CliError{3, "InputNotFound", message};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  ~Handle() { reset(); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  void reset() {
    if (ptr) Free(ptr);
    ptr = nullptr;
  }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using FieldHandle = Handle<bm_field, bm_field_free>;
using ModelHandle = Handle<bm_model, bm_model_free>;
using InfoHandle = Handle<bm_dmd_info, bm_dmd_info_free>;
using TableHandle = Handle<bm_mode_table, bm_mode_table_free>;
using ReportHandle = Handle<bm_flux_report, bm_flux_report_free>;

json load_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) io_error(std::string("cannot open ") + what + ": " + path);
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const std::exception& e) {
    throw CliError{3, "CorruptPayload", std::string("bad JSON in ") + path + ": " + e.what()};
  }
}

void validate_against(const char* schema_text, const json& value, const std::string& what) {
  const json schema = json::parse(schema_text);
  const auto violations = bedmorph::cli::schema_violations(schema, value);
  if (!violations.empty()) {
    std::string detail = what + " violates the published schema:";
    for (const auto& v : violations) detail += "\n  " + v;
    config_error(detail);
  }
}

/// Flags set on the command line become JSON entries; a --config file then
/// overrides them key by key. The merged object is schema-validated before
/// any work starts.
json merge_config(const json& flag_config, const std::string& config_path,
                  const std::string& subcommand) {
  json merged = flag_config;
  if (!config_path.empty()) {
    const json file_config = load_json_file(config_path, "config");
    if (!file_config.is_object()) config_error("config file must hold a JSON object");
    for (const auto& [key, value] : file_config.items()) merged[key] = value;
  }
  merged["subcommand"] = subcommand;
  validate_against(bedmorph::cli::kRunConfigSchema, merged, "configuration");
  return merged;
}

std::string format17(double v) { return bedmorph::detail::json_number(v); }

/// Canonical resolved configuration: alphabetical keys, 17-digit floats.
/// Byte-identical reruns of the same invocation rewrite the same file.
void write_run_config(const json& resolved, const fs::path& dir) {
  std::vector<std::string> keys;
  for (const auto& [key, value] : resolved.items()) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  JsonWriter w;
  w.begin_object();
  for (const auto& key : keys) {
    const json& v = resolved[key];
    w.key(key);
    if (v.is_string()) {
      w.value(v.get<std::string>());
    } else if (v.is_boolean()) {
      w.value(v.get<bool>());
    } else if (v.is_number_integer()) {
      w.value(v.get<long long>());
    } else if (v.is_number()) {
      w.value(v.get<double>());
    } else if (v.is_array()) {
      w.begin_array();
      for (const auto& item : v) {
        if (item.is_number_integer()) w.value(item.get<long long>());
        else w.value(item.get<double>());
      }
      w.end_array();
    } else {
      w.null();
    }
  }
  w.end_object();
  bedmorph::detail::write_text_file((dir / "run_config.json").string(), w.str() + "\n");
}

fs::path prepare_output_dir(const json& cfg) {
  const auto dir = fs::path(cfg.value("output_dir", std::string(".")));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) io_error("cannot create output directory " + dir.string());
  return dir;
}

std::string require_input(const json& cfg) {
  if (!cfg.contains("input")) config_error("missing required option --input");
  return cfg["input"].get<std::string>();
}

int32_t parse_rank(const json& cfg) {
  if (!cfg.contains("rank")) return BM_RANK_FULL;
  const json& r = cfg["rank"];
  if (r.is_string()) return BM_RANK_FULL;  // schema restricts strings to "full"
  return r.get<int32_t>();
}

/* ------------------------------ synth ------------------------------ */

int cmd_synth(const json& cfg) {
  const fs::path outdir = prepare_output_dir(cfg);
  const std::string scenario_path = require_input(cfg);

  json scenario = load_json_file(scenario_path, "scenario");
  validate_against(bedmorph::cli::kScenarioSchema, scenario, "scenario");
  if (cfg.contains("seed")) scenario["seed"] = cfg["seed"].get<std::uint64_t>();

  FieldHandle field;
  check(bm_field_synthesize(scenario.dump().c_str(), field.out()));

  const std::string out_path =
      cfg.contains("output") ? cfg["output"].get<std::string>()
                             : (outdir / "field.bedgrid").string();
  check(bm_field_write(field.get(), out_path.c_str()));

  json resolved = cfg;
  resolved["output"] = out_path;
  write_run_config(resolved, outdir);

  size_t nx = 0, ny = 0, nt = 0;
  check(bm_field_dims(field.get(), &nx, &ny, &nt));
  std::cout << "wrote " << out_path << " (" << nx << "x" << ny << "x" << nt << ")\n";
  return 0;
}

/* ---------------------------- decompose ---------------------------- */

int cmd_decompose(const json& cfg) {
  const fs::path outdir = prepare_output_dir(cfg);
  const std::string input = require_input(cfg);

  FieldHandle field;
  check(bm_field_read(input.c_str(), field.out()));
  size_t nx = 0, ny = 0, nt = 0;
  check(bm_field_dims(field.get(), &nx, &ny, &nt));

  bm_dmd_options options;
  bm_dmd_options_init(&options);
  options.train_fraction = cfg.value("train_fraction", options.train_fraction);
  options.rank = parse_rank(cfg);
  options.remove_mean = cfg.value("remove_mean", true) ? 1 : 0;
  options.sv_rel_cutoff = cfg.value("sv_cutoff", options.sv_rel_cutoff);
  options.fit_all_snapshots = cfg.value("fit_all_snapshots", false) ? 1 : 0;

  const double persistence_tol = cfg.value("persistence_tol", 0.01);
  const size_t transect = cfg.value("transect", ny / 2);

  ModelHandle model;
  InfoHandle info;
  check(bm_dmd_compute(field.get(), &options, model.out(), info.out()));
  check(bm_model_save(model.get(), (outdir / "model.dmdmodel").string().c_str()));

  TableHandle table;
  check(bm_mode_table_compute(model.get(), persistence_tol, transect, table.out()));
  check(bm_mode_table_write_csv(table.get(), (outdir / "spectrum.csv").string().c_str()));
  check(bm_mode_table_write_json(table.get(), (outdir / "spectrum.json").string().c_str()));

  // Decomposition log: training size, rank, singular-value tail, persistence
  // census and region counts.
  size_t q = 0;
  check(bm_dmd_info_train_count(info.get(), &q));
  size_t sv_count = 0;
  check(bm_dmd_info_singular_values(info.get(), nullptr, 0, &sv_count));
  std::vector<double> singular(sv_count);
  check(bm_dmd_info_singular_values(info.get(), singular.data(), sv_count, nullptr));
  int32_t rank = 0;
  check(bm_model_rank(model.get(), &rank));

  size_t rows = 0;
  check(bm_mode_table_size(table.get(), &rows));
  size_t decaying = 0, persistent = 0, growing = 0, pairs = 0, excluded = 0;
  for (size_t i = 0; i < rows; ++i) {
    bm_mode_row row;
    check(bm_mode_table_row(table.get(), i, &row));
    if (row.persistence == BM_PERSISTENCE_DECAYING) ++decaying;
    if (row.persistence == BM_PERSISTENCE_PERSISTENT) ++persistent;
    if (row.persistence == BM_PERSISTENCE_GROWING) ++growing;
    if (row.pair_index >= 0 && row.pair_index > row.index) ++pairs;
    if (std::isnan(row.re_omega)) ++excluded;
  }

  std::vector<double> edges = {3.9 * 60.0, 6.0 * 60.0, 60.0 * 60.0};
  if (cfg.contains("region_edges")) edges = cfg["region_edges"].get<std::vector<double>>();
  std::vector<size_t> counts(edges.size() + 1, 0);
  if (rows > 0) {
    check(bm_mode_table_bin(table.get(), edges.data(), edges.size(), counts.data()));
  }

  JsonWriter w;
  w.begin_object();
  w.kv("input", input);
  w.kv("snapshots", nt);
  w.kv("state_size", nx * ny);
  w.kv("q", q);
  w.kv("rank", static_cast<long long>(rank));
  w.key("singular_values");
  w.begin_object();
  w.kv("count", sv_count);
  w.kv("max", sv_count ? singular.front() : 0.0);
  w.kv("min_kept", rank > 0 ? singular[static_cast<size_t>(rank) - 1] : 0.0);
  w.key("tail");
  w.begin_array();
  const size_t tail_start = sv_count > 8 ? sv_count - 8 : 0;
  for (size_t i = tail_start; i < sv_count; ++i) w.value(singular[i]);
  w.end_array();
  w.end_object();
  w.key("persistence_counts");
  w.begin_object();
  w.kv("decaying", decaying);
  w.kv("persistent", persistent);
  w.kv("growing", growing);
  w.end_object();
  w.kv("conjugate_pairs", pairs);
  w.kv("excluded_zero_eigenvalues", excluded);
  w.key("region_edges_s");
  w.begin_array();
  for (double e : edges) w.value(e);
  w.end_array();
  w.key("region_counts");
  w.begin_array();
  for (size_t c : counts) w.value(c);
  w.end_array();
  w.end_object();
  bedmorph::detail::write_text_file((outdir / "decompose_log.json").string(), w.str() + "\n");

  json resolved = cfg;
  resolved["train_fraction"] = options.train_fraction;
  resolved["remove_mean"] = options.remove_mean != 0;
  resolved["persistence_tol"] = persistence_tol;
  resolved["transect"] = transect;
  if (!resolved.contains("rank")) resolved["rank"] = "full";
  write_run_config(resolved, outdir);

  std::cout << "q=" << q << " rank=" << rank << " pairs=" << pairs << "\n";
  return 0;
}

/* ------------------------------ flux ------------------------------- */

int cmd_flux(const json& cfg) {
  const fs::path outdir = prepare_output_dir(cfg);
  const std::string input = require_input(cfg);

  ModelHandle model;
  check(bm_model_load(input.c_str(), model.out()));
  size_t m = 0, n = 0, q = 0;
  double dt = 0.0;
  check(bm_model_grid(model.get(), &m, &n));
  check(bm_model_sampling(model.get(), &dt, nullptr, nullptr));
  check(bm_model_train_count(model.get(), &q));

  const double persistence_tol = cfg.value("persistence_tol", 0.01);
  const size_t transect = cfg.value("transect", n / 2);

  bm_flux_config flux_cfg;
  bm_flux_config_init(&flux_cfg);
  flux_cfg.porosity = cfg.value("porosity", 0.4);
  flux_cfg.y_index = transect;
  flux_cfg.x_min = 0;
  flux_cfg.x_max = m > 0 ? m - 1 : 0;
  if (cfg.contains("x_range")) {
    const auto range = cfg["x_range"].get<std::vector<std::int64_t>>();
    flux_cfg.x_min = static_cast<size_t>(range[0]);
    flux_cfg.x_max = static_cast<size_t>(range[1]);
  }

  std::vector<double> times;
  if (cfg.contains("times")) {
    times = cfg["times"].get<std::vector<double>>();
  } else {
    // Default to the training sample times.
    times.resize(q);
    for (size_t j = 0; j < q; ++j) times[j] = static_cast<double>(j) * dt;
  }
  flux_cfg.times = times.data();
  flux_cfg.n_times = times.size();

  const std::string order_name = cfg.value("order", std::string("BySpeedAscending"));
  if (order_name == "BySpeedAscending") flux_cfg.order = BM_ORDER_BY_SPEED_ASCENDING;
  else if (order_name == "BySpeedDescending") flux_cfg.order = BM_ORDER_BY_SPEED_DESCENDING;
  else flux_cfg.order = BM_ORDER_BY_MAGNITUDE;

  TableHandle table;
  check(bm_mode_table_compute(model.get(), persistence_tol, transect, table.out()));

  ReportHandle report;
  const bm_status report_status =
      bm_flux_report_compute(model.get(), table.get(), &flux_cfg, report.out());

  if (report_status == BM_ERR_NO_CONTRIBUTING_MODES) {
    // Nothing moves (static field or all omega = 0): emit a zero time series
    // and an empty ranking rather than failing the stage.
    std::ostringstream csv;
    csv << "time_s,net_flux\n";
    for (double t : times) {
      double net = 0.0;
      check(bm_net_flux(model.get(), table.get(), &flux_cfg, t, &net));
      csv << format17(t) << ',' << format17(net) << '\n';
    }
    bedmorph::detail::write_text_file((outdir / "flux_timeseries.csv").string(), csv.str());

    JsonWriter w;
    w.begin_object();
    w.kv("no_contributing_modes", true);
    w.key("config");
    w.begin_object();
    w.kv("porosity", flux_cfg.porosity);
    w.kv("y_index", flux_cfg.y_index);
    w.kv("x_min", flux_cfg.x_min);
    w.kv("x_max", flux_cfg.x_max);
    w.kv("time_count", times.size());
    w.kv("order", order_name);
    w.end_object();
    w.end_object();
    bedmorph::detail::write_text_file((outdir / "flux.json").string(), w.str() + "\n");
    bedmorph::detail::write_text_file((outdir / "cumulative.dat").string(),
                                      "# mode_rank cumulative_percent (empty: no contributing modes)\n");
  } else {
    check(report_status);
    check(bm_flux_report_write_json(report.get(), table.get(),
                                    (outdir / "flux.json").string().c_str()));
    check(bm_flux_report_write_csv(report.get(),
                                   (outdir / "flux_timeseries.csv").string().c_str()));
    check(bm_flux_report_write_plot(report.get(),
                                    (outdir / "cumulative.dat").string().c_str()));
  }

  json resolved = cfg;
  resolved["porosity"] = flux_cfg.porosity;
  resolved["transect"] = transect;
  resolved["x_range"] = {static_cast<std::int64_t>(flux_cfg.x_min),
                         static_cast<std::int64_t>(flux_cfg.x_max)};
  resolved["order"] = order_name;
  write_run_config(resolved, outdir);

  std::cout << "flux report written to " << outdir.string() << "\n";
  return 0;
}

/* ------------------------------ report ----------------------------- */

int cmd_report(const json& cfg) {
  const fs::path outdir = prepare_output_dir(cfg);
  const std::string input = require_input(cfg);
  if (!cfg.contains("model")) config_error("missing required option --model");
  const std::string model_path = cfg["model"].get<std::string>();

  FieldHandle field;
  check(bm_field_read(input.c_str(), field.out()));
  ModelHandle model;
  check(bm_model_load(model_path.c_str(), model.out()));

  size_t nx = 0, ny = 0, nt = 0;
  check(bm_field_dims(field.get(), &nx, &ny, &nt));

  bm_metrics_options options;
  bm_metrics_options_init(&options);
  options.snapshot = cfg.value("snapshot", nt / 2);
  options.y_index = cfg.value("transect", ny / 2);
  options.bins = cfg.value("bins", size_t{0});
  options.epsilon = cfg.value("epsilon", 1e-6);

  check(bm_metrics_report_write(model.get(), field.get(), &options,
                                (outdir / "metrics.json").string().c_str()));

  json resolved = cfg;
  resolved["snapshot"] = options.snapshot;
  resolved["transect"] = options.y_index;
  resolved["bins"] = options.bins;
  resolved["epsilon"] = options.epsilon;
  write_run_config(resolved, outdir);

  std::cout << "metrics written to " << (outdir / "metrics.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bed-elevation mode decomposition and sediment-flux attribution"};
  app.require_subcommand(1);

  std::string config_path;
  json flags = json::object();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--output-dir", [&](const std::string& v) { flags["output_dir"] = v; },
        "directory for generated files (default .)");
    sub->add_option("--config", config_path, "JSON config file; overrides flags");
  };
  auto add_input = [&](CLI::App* sub, const char* help) {
    sub->add_option_function<std::string>(
        "--input", [&](const std::string& v) { flags["input"] = v; }, help);
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic bedform field");
  add_common(synth);
  add_input(synth, "scenario JSON file");
  synth->add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t v) { flags["seed"] = v; }, "noise seed override");
  synth->add_option_function<std::string>(
      "--output", [&](const std::string& v) { flags["output"] = v; }, "BEDGRID output path");

  CLI::App* decompose = app.add_subcommand("decompose", "fit the mode decomposition");
  add_common(decompose);
  add_input(decompose, "BEDGRID file or CSV snapshot directory");
  decompose->add_option_function<double>(
      "--train-fraction", [&](double v) { flags["train_fraction"] = v; },
      "fraction of snapshots used for training (default 0.98)");
  decompose->add_option_function<std::string>(
      "--rank",
      [&](const std::string& v) {
        if (v == "full") flags["rank"] = "full";
        else {
          try {
            flags["rank"] = std::stoi(v);
          } catch (const std::exception&) {
            throw CLI::ValidationError("--rank", "expected an integer or 'full'");
          }
        }
      },
      "truncation rank or 'full' (default full)");
  decompose->add_flag_function(
      "--no-mean-removal",
      [&](std::int64_t count) { if (count) flags["remove_mean"] = false; },
      "keep the temporal mean in the data");
  decompose->add_option_function<double>(
      "--persistence-tol", [&](double v) { flags["persistence_tol"] = v; },
      "unit-circle tolerance band (default 0.01)");
  decompose->add_option_function<std::int64_t>(
      "--transect", [&](std::int64_t v) { flags["transect"] = v; },
      "spanwise index for wavelength estimation (default center)");
  decompose->add_option_function<std::vector<double>>(
      "--region-edges", [&](const std::vector<double>& v) { flags["region_edges"] = v; },
      "period bin edges in seconds")->delimiter(',');
  decompose->add_option_function<double>(
      "--sv-cutoff", [&](double v) { flags["sv_cutoff"] = v; },
      "relative singular-value cutoff (default 1e-12)");
  decompose->add_flag_function(
      "--fit-all-snapshots",
      [&](std::int64_t count) { if (count) flags["fit_all_snapshots"] = true; },
      "least-squares amplitudes over all training snapshots (extension)");

  CLI::App* flux = app.add_subcommand("flux", "per-mode Exner flux attribution");
  add_common(flux);
  add_input(flux, "DMDMODEL file");
  flux->add_option_function<double>(
      "--porosity", [&](double v) { flags["porosity"] = v; }, "bed porosity (default 0.4)");
  flux->add_option_function<std::int64_t>(
      "--transect", [&](std::int64_t v) { flags["transect"] = v; },
      "spanwise index of the transect (default center)");
  flux->add_option_function<std::string>(
      "--x-range",
      [&](const std::string& v) {
        const auto sep = v.find(':');
        if (sep == std::string::npos) {
          throw CLI::ValidationError("--x-range", "expected MIN:MAX");
        }
        try {
          flags["x_range"] = {std::stoll(v.substr(0, sep)), std::stoll(v.substr(sep + 1))};
        } catch (const std::exception&) {
          throw CLI::ValidationError("--x-range", "expected MIN:MAX integers");
        }
      },
      "inclusive streamwise index range (default full transect)");
  flux->add_option_function<std::string>(
      "--order",
      [&](const std::string& v) {
        if (v == "speed-asc") flags["order"] = "BySpeedAscending";
        else if (v == "speed-desc") flags["order"] = "BySpeedDescending";
        else if (v == "magnitude") flags["order"] = "ByMagnitude";
        else throw CLI::ValidationError("--order", "expected speed-asc, speed-desc or magnitude");
      },
      "ranking order for the cumulative report (default speed-asc)");
  flux->add_option_function<std::vector<double>>(
      "--times", [&](const std::vector<double>& v) { flags["times"] = v; },
      "evaluation times in seconds (default: training sample times)")->delimiter(',');
  flux->add_option_function<double>(
      "--persistence-tol", [&](double v) { flags["persistence_tol"] = v; },
      "unit-circle tolerance band (default 0.01)");

  CLI::App* report = app.add_subcommand("report", "reconstruction-quality metrics");
  add_common(report);
  add_input(report, "original BEDGRID file or CSV directory");
  report->add_option_function<std::string>(
      "--model", [&](const std::string& v) { flags["model"] = v; }, "DMDMODEL file");
  report->add_option_function<std::int64_t>(
      "--snapshot", [&](std::int64_t v) { flags["snapshot"] = v; },
      "snapshot index for the headline MAPE (default middle)");
  report->add_option_function<std::int64_t>(
      "--transect", [&](std::int64_t v) { flags["transect"] = v; },
      "spanwise index (default center)");
  report->add_option_function<std::int64_t>(
      "--bins", [&](std::int64_t v) { flags["bins"] = v; },
      "PDF bin count (default Freedman-Diaconis, floor 16)");
  report->add_option_function<double>(
      "--epsilon", [&](double v) { flags["epsilon"] = v; },
      "MAPE near-zero guard in meters (default 1e-6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    JsonWriter w;
    w.begin_object();
    w.key("error");
    w.begin_object();
    w.kv("kind", "InvalidArgument");
    w.kv("message", std::string(e.what()));
    w.end_object();
    w.end_object();
    std::cerr << w.str() << "\n";
    return 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(merge_config(flags, config_path, "synth"));
    if (decompose->parsed()) return cmd_decompose(merge_config(flags, config_path, "decompose"));
    if (flux->parsed()) return cmd_flux(merge_config(flags, config_path, "flux"));
    if (report->parsed()) return cmd_report(merge_config(flags, config_path, "report"));
  } catch (const CliError& e) {
    JsonWriter w;
    w.begin_object();
    w.key("error");
    w.begin_object();
    w.kv("kind", e.kind);
    w.kv("message", e.message);
    w.end_object();
    w.end_object();
    std::cerr << w.str() << "\n";
    return e.exit_code;
  } catch (const bedmorph::Error& e) {
    // Header-only utilities (file writers) raise these inside the CLI itself.
    const bool io = e.code() == bedmorph::ErrorCode::InputNotFound ||
                    e.code() == bedmorph::ErrorCode::CorruptPayload;
    JsonWriter w;
    w.begin_object();
    w.key("error");
    w.begin_object();
    w.kv("kind", io ? (e.code() == bedmorph::ErrorCode::InputNotFound ? "InputNotFound"
                                                                      : "CorruptPayload")
                    : "Internal");
    w.kv("message", std::string(e.what()));
    w.end_object();
    w.end_object();
    std::cerr << w.str() << "\n";
    return io ? 3 : 4;
  } catch (const std::exception& e) {
    std::cerr << R"({"error":{"kind":"Internal","message":")"
              << bedmorph::detail::json_escape(e.what()) << "\"}}\n";
    return 4;
  }
  return 2;
}
