#include "bedmorph/flux.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "bedmorph/errors.hpp"
#include "bedmorph/detail/json_writer.hpp"

namespace bedmorph {

namespace {

using Complex = std::complex<double>;

void check_transect(const DmdModel& model, const FluxConfig& cfg) {
  if (cfg.y_index >= model.grid_n) {
    raise(ErrorCode::TransectOutOfRange,
          "transect " + std::to_string(cfg.y_index) + " outside spanwise range " +
              std::to_string(model.grid_n));
  }
  if (cfg.x_max >= model.grid_m) {
    raise(ErrorCode::TransectOutOfRange, "x range exceeds streamwise extent");
  }
  if (cfg.x_max < cfg.x_min + 1) {
    raise(ErrorCode::DegenerateRange, "x range must hold at least two points");
  }
  if (!(cfg.porosity >= 0.0) || !(cfg.porosity < 1.0)) {
    raise(ErrorCode::InvalidArgument, "porosity must lie in [0, 1)");
  }
}

/// Complex modal flux before pair aggregation:
///   alpha_k e^{omega_k t} omega_k integral(phi_k), no porosity prefactor.
Complex raw_mode_flux(const DmdModel& model, int k, const FluxConfig& cfg, double t) {
  const Complex omega = model.continuous_eigs(k);
  const Complex integral = mode_spatial_integral(model, k, cfg.y_index, cfg.x_min, cfg.x_max);
  return model.amplitudes(k) * std::exp(omega * t) * omega * integral;
}

/// Representative (lower-index) members of each conjugate pair plus all
/// unpaired modes, ascending; lambda == 0 modes are reported separately.
std::vector<int> contributor_indices(const DmdModel& model,
                                     const std::vector<ModeSummary>& summaries,
                                     std::vector<int>* excluded) {
  std::vector<int> out;
  for (const ModeSummary& s : summaries) {
    if (s.pair_index >= 0 && s.pair_index < s.index) continue;
    if (model.mode_excluded(s.index)) {
      if (excluded) excluded->push_back(s.index);
      continue;
    }
    out.push_back(s.index);
  }
  return out;
}

double pair_flux_value(const DmdModel& model, const std::vector<ModeSummary>& summaries,
                       int k, const FluxConfig& cfg, double t) {
  const Complex q = raw_mode_flux(model, k, cfg, t);
  const bool paired = summaries[static_cast<std::size_t>(k)].pair_index >= 0;
  const double combined = paired ? 2.0 * q.real() : q.real();
  return -(1.0 - cfg.porosity) * combined;
}

}  // namespace

const char* ranking_order_name(RankingOrder order) {
  switch (order) {
    case RankingOrder::BySpeedAscending: return "BySpeedAscending";
    case RankingOrder::BySpeedDescending: return "BySpeedDescending";
    case RankingOrder::ByMagnitude: return "ByMagnitude";
  }
  return "Unknown";
}

std::complex<double> mode_spatial_integral(const DmdModel& model, int k,
                                           std::size_t y_index,
                                           std::size_t x_min, std::size_t x_max) {
  if (k < 0 || k >= model.rank) raise(ErrorCode::InvalidArgument, "mode index out of range");
  if (y_index >= model.grid_n) {
    raise(ErrorCode::TransectOutOfRange, "transect outside spanwise range");
  }
  if (x_max >= model.grid_m) {
    raise(ErrorCode::TransectOutOfRange, "x range exceeds streamwise extent");
  }
  if (x_max < x_min + 1) {
    raise(ErrorCode::DegenerateRange, "x range must hold at least two points");
  }

  const auto n = static_cast<Eigen::Index>(model.grid_n);
  auto sample = [&](std::size_t i) {
    return model.modes(static_cast<Eigen::Index>(i) * n + static_cast<Eigen::Index>(y_index), k);
  };

  Complex sum = 0.5 * (sample(x_min) + sample(x_max));
  for (std::size_t i = x_min + 1; i < x_max; ++i) sum += sample(i);
  return sum * model.dx;
}

double modal_flux(const DmdModel& model, const std::vector<ModeSummary>& summaries,
                  int k, const FluxConfig& cfg, double t) {
  if (k < 0 || k >= model.rank) raise(ErrorCode::InvalidArgument, "mode index out of range");
  if (summaries.size() != static_cast<std::size_t>(model.rank)) {
    raise(ErrorCode::ShapeMismatch, "summaries do not match the model");
  }
  check_transect(model, cfg);
  if (model.mode_excluded(k)) {
    raise(ErrorCode::ExcludedMode,
          "mode " + std::to_string(k) + " has lambda = 0 and no continuous-time flux");
  }
  return pair_flux_value(model, summaries, k, cfg, t);
}

double net_flux(const DmdModel& model, const std::vector<ModeSummary>& summaries,
                const FluxConfig& cfg, double t, std::vector<int>* excluded) {
  if (summaries.size() != static_cast<std::size_t>(model.rank)) {
    raise(ErrorCode::ShapeMismatch, "summaries do not match the model");
  }
  check_transect(model, cfg);
  const std::vector<int> reps = contributor_indices(model, summaries, excluded);
  double total = 0.0;
  for (int k : reps) total += pair_flux_value(model, summaries, k, cfg, t);
  return total;
}

double net_flux_from_derivative(const DmdModel& model, const FluxConfig& cfg, double t) {
  check_transect(model, cfg);
  // d/dt of the modal expansion, evaluated on the transect and integrated by
  // the same trapezoidal rule as the per-mode route.
  const auto n = static_cast<Eigen::Index>(model.grid_n);
  const std::size_t span = cfg.x_max - cfg.x_min + 1;
  Eigen::VectorXd dhdt = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(span));
  for (int k = 0; k < model.rank; ++k) {
    if (model.mode_excluded(k)) continue;
    const Complex omega = model.continuous_eigs(k);
    const Complex gain = model.amplitudes(k) * std::exp(omega * t) * omega;
    for (std::size_t i = 0; i < span; ++i) {
      const auto row =
          static_cast<Eigen::Index>(cfg.x_min + i) * n + static_cast<Eigen::Index>(cfg.y_index);
      dhdt(static_cast<Eigen::Index>(i)) += (gain * model.modes(row, k)).real();
    }
  }
  double integral = 0.5 * (dhdt(0) + dhdt(dhdt.size() - 1));
  for (Eigen::Index i = 1; i + 1 < dhdt.size(); ++i) integral += dhdt(i);
  integral *= model.dx;
  return -(1.0 - cfg.porosity) * integral;
}

FluxReport cumulative_contribution(const DmdModel& model,
                                   const std::vector<ModeSummary>& summaries,
                                   const FluxConfig& cfg, RankingOrder order) {
  if (summaries.size() != static_cast<std::size_t>(model.rank)) {
    raise(ErrorCode::ShapeMismatch, "summaries do not match the model");
  }
  check_transect(model, cfg);
  if (cfg.times.empty()) raise(ErrorCode::InvalidArgument, "flux config needs evaluation times");

  FluxReport report;
  report.order = order;
  report.config = cfg;
  report.contributors = contributor_indices(model, summaries, &report.excluded_modes);

  const auto n_contrib = static_cast<Eigen::Index>(report.contributors.size());
  const auto n_times = static_cast<Eigen::Index>(cfg.times.size());
  report.per_mode.resize(n_contrib, n_times);
  report.net = Eigen::VectorXd::Zero(n_times);

  for (Eigen::Index c = 0; c < n_contrib; ++c) {
    const int k = report.contributors[static_cast<std::size_t>(c)];
    for (Eigen::Index j = 0; j < n_times; ++j) {
      report.per_mode(c, j) =
          pair_flux_value(model, summaries, k, cfg, cfg.times[static_cast<std::size_t>(j)]);
    }
  }
  // Same ascending-contributor summation order as net_flux, so both agree
  // bit-for-bit.
  for (Eigen::Index j = 0; j < n_times; ++j) {
    double total = 0.0;
    for (Eigen::Index c = 0; c < n_contrib; ++c) total += report.per_mode(c, j);
    report.net(j) = total;
  }

  report.magnitude.resize(static_cast<std::size_t>(n_contrib));
  double magnitude_sum = 0.0;
  for (Eigen::Index c = 0; c < n_contrib; ++c) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n_times; ++j) acc += std::abs(report.per_mode(c, j));
    report.magnitude[static_cast<std::size_t>(c)] = acc / static_cast<double>(n_times);
    magnitude_sum += report.magnitude[static_cast<std::size_t>(c)];
  }
  if (n_contrib == 0 || magnitude_sum == 0.0) {
    raise(ErrorCode::NoContributingModes, "every modal flux contribution is zero");
  }

  report.ranking.resize(static_cast<std::size_t>(n_contrib));
  std::iota(report.ranking.begin(), report.ranking.end(), 0);
  auto speed_of = [&](int pos) -> std::optional<double> {
    const int k = report.contributors[static_cast<std::size_t>(pos)];
    return summaries[static_cast<std::size_t>(k)].speed_m_per_s;
  };
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](int a, int b) {
    if (order == RankingOrder::ByMagnitude) {
      const double ma = report.magnitude[static_cast<std::size_t>(a)];
      const double mb = report.magnitude[static_cast<std::size_t>(b)];
      if (ma != mb) return ma > mb;
      return a < b;
    }
    const auto sa = speed_of(a);
    const auto sb = speed_of(b);
    if (sa.has_value() != sb.has_value()) return sa.has_value();  // undefined speeds last
    if (sa && sb && *sa != *sb) {
      return order == RankingOrder::BySpeedAscending ? *sa < *sb : *sa > *sb;
    }
    return a < b;
  });

  report.cumulative_percent.resize(static_cast<std::size_t>(n_contrib));
  double running = 0.0;
  for (std::size_t pos = 0; pos < report.ranking.size(); ++pos) {
    const auto c = static_cast<std::size_t>(report.ranking[pos]);
    running += 100.0 * report.magnitude[c] / magnitude_sum;
    report.cumulative_percent[pos] = running;
  }
  report.cumulative_percent.back() = 100.0;  // normalization closes the ledger
  return report;
}

void write_flux_json(const FluxReport& report,
                     const std::vector<ModeSummary>& summaries,
                     const std::string& path) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  detail::JsonWriter w;
  w.begin_object();
  w.key("config");
  w.begin_object();
  w.kv("porosity", report.config.porosity);
  w.kv("y_index", report.config.y_index);
  w.kv("x_min", report.config.x_min);
  w.kv("x_max", report.config.x_max);
  w.kv("time_count", report.config.times.size());
  w.kv("order", ranking_order_name(report.order));
  w.end_object();

  w.key("excluded_modes");
  w.begin_array();
  for (int k : report.excluded_modes) w.value(k);
  w.end_array();

  w.key("ranking");
  w.begin_array();
  for (std::size_t pos = 0; pos < report.ranking.size(); ++pos) {
    const auto c = static_cast<std::size_t>(report.ranking[pos]);
    const int k = report.contributors[c];
    const ModeSummary& s = summaries[static_cast<std::size_t>(k)];
    w.begin_object();
    w.kv("rank", pos + 1);
    w.kv("mode_index", k);
    w.kv("pair_index", s.pair_index);
    w.kv("speed_m_per_s", s.speed_m_per_s.value_or(nan));
    w.kv("mean_abs_flux", report.magnitude[c]);
    w.kv("cumulative_percent", report.cumulative_percent[pos]);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  detail::write_text_file(path, w.str() + "\n");
}

void write_flux_timeseries_csv(const FluxReport& report, const std::string& path) {
  std::ostringstream out;
  out << "time_s,net_flux";
  for (int k : report.contributors) out << ",pair_" << k << "_flux";
  out << '\n';
  char buf[40];
  for (Eigen::Index j = 0; j < report.net.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", report.config.times[static_cast<std::size_t>(j)]);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", report.net(j));
    out << ',' << buf;
    for (Eigen::Index c = 0; c < report.per_mode.rows(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", report.per_mode(c, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  detail::write_text_file(path, out.str());
}

void write_cumulative_plot(const FluxReport& report, const std::string& path) {
  std::ostringstream out;
  out << "# mode_rank cumulative_percent (" << ranking_order_name(report.order) << ")\n";
  char buf[40];
  for (std::size_t pos = 0; pos < report.cumulative_percent.size(); ++pos) {
    std::snprintf(buf, sizeof(buf), "%.17g", report.cumulative_percent[pos]);
    out << (pos + 1) << ' ' << buf << '\n';
  }
  detail::write_text_file(path, out.str());
}

}  // namespace bedmorph
