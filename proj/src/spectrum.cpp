#include "bedmorph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "bedmorph/errors.hpp"
#include "fft_util.hpp"
#include "bedmorph/detail/json_writer.hpp"

namespace bedmorph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median_of(std::vector<double> values) {
  const std::size_t n = values.size();
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(values.begin(), mid);
  return 0.5 * (lo + hi);
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* persistence_name(Persistence p) {
  switch (p) {
    case Persistence::Decaying: return "Decaying";
    case Persistence::Persistent: return "Persistent";
    case Persistence::Growing: return "Growing";
  }
  return "Unknown";
}

Persistence classify_eigenvalue(std::complex<double> lambda, double tol) {
  if (!(tol > 0.0) || !(tol < 0.5)) {
    raise(ErrorCode::InvalidArgument, "persistence tolerance must lie in (0, 0.5)");
  }
  const double modulus = std::abs(lambda);
  if (modulus < 1.0 - tol) return Persistence::Decaying;
  if (modulus > 1.0 + tol) return Persistence::Growing;
  return Persistence::Persistent;
}

double mode_period(std::complex<double> omega) {
  const double im = std::abs(omega.imag());
  if (im == 0.0) return std::numeric_limits<double>::infinity();
  return kTwoPi / im;
}

double mode_power(const DmdModel& model, int k) {
  if (k < 0 || k >= model.rank) raise(ErrorCode::InvalidArgument, "mode index out of range");
  return std::norm(model.amplitudes(k)) * model.modes.col(k).squaredNorm();
}

std::vector<int> pair_conjugates(const Eigen::VectorXcd& eigenvalues, double rel_tol) {
  const auto r = eigenvalues.size();
  std::vector<int> partner(static_cast<std::size_t>(r), -1);
  for (Eigen::Index k = 0; k < r; ++k) {
    if (partner[static_cast<std::size_t>(k)] != -1) continue;
    const std::complex<double> lk = eigenvalues(k);
    if (lk.imag() == 0.0) continue;  // real eigenvalues stay unpaired
    Eigen::Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < r; ++j) {
      if (j == k || partner[static_cast<std::size_t>(j)] != -1) continue;
      const double dist = std::abs(eigenvalues(j) - std::conj(lk));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best >= 0 && best_dist <= rel_tol * std::abs(lk)) {
      partner[static_cast<std::size_t>(k)] = static_cast<int>(best);
      partner[static_cast<std::size_t>(best)] = static_cast<int>(k);
    }
  }
  return partner;
}

WavelengthEstimate mode_wavelength(const DmdModel& model, int k, std::size_t y_index) {
  if (k < 0 || k >= model.rank) raise(ErrorCode::InvalidArgument, "mode index out of range");
  if (y_index >= model.grid_n) {
    raise(ErrorCode::TransectOutOfRange,
          "transect " + std::to_string(y_index) + " outside spanwise range " +
              std::to_string(model.grid_n));
  }
  const std::size_t m = model.grid_m;
  if (m <= 4) {
    raise(ErrorCode::InvalidArgument, "need more than 4 streamwise points for wavelength");
  }

  std::vector<double> profile(m);
  for (std::size_t i = 0; i < m; ++i) {
    profile[i] = model.modes(static_cast<Eigen::Index>(i * model.grid_n + y_index), k).real();
  }

  WavelengthEstimate estimate;

  double mean = 0.0;
  for (double v : profile) mean += v;
  mean /= static_cast<double>(m);
  double variance = 0.0;
  for (double v : profile) variance += (v - mean) * (v - mean);
  variance /= static_cast<double>(m);
  if (variance < 1e-14) return estimate;  // spectrally flat profile

  std::vector<double> centered(m);
  for (std::size_t i = 0; i < m; ++i) centered[i] = profile[i] - mean;

  // Primary: peak of the Hann-windowed spatial amplitude spectrum.
  std::vector<double> windowed(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double w =
        0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(m - 1)));
    windowed[i] = centered[i] * w;
  }
  const std::vector<double> spectrum = detail::amplitude_spectrum(windowed);
  std::size_t peak = 0;
  for (std::size_t b = 1; b < spectrum.size(); ++b) {
    if (spectrum[b] > spectrum[peak]) peak = b;
  }
  if (peak > 0) {
    estimate.spectral_m = static_cast<double>(m) * model.dx / static_cast<double>(peak);
  }

  // Secondary: median spatial derivative of the unwrapped instantaneous phase.
  const auto analytic = detail::analytic_signal(centered);
  std::vector<double> phase(m);
  for (std::size_t i = 0; i < m; ++i) phase[i] = std::arg(analytic[i]);
  detail::unwrap_phase(phase);
  std::vector<double> dphi;
  dphi.reserve(m - 2);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    dphi.push_back((phase[i + 1] - phase[i - 1]) / (2.0 * model.dx));
  }
  const double med = median_of(std::move(dphi));
  if (std::abs(med) > 1e-12) estimate.hilbert_m = kTwoPi / std::abs(med);

  return estimate;
}

std::optional<double> mode_speed(const ModeSummary& summary) {
  if (!summary.wavelength_m.has_value()) return std::nullopt;
  if (!std::isfinite(summary.period_s)) return std::nullopt;
  return *summary.wavelength_m / summary.period_s;
}

std::vector<ModeSummary> summarize_modes(const DmdModel& model, const SpectrumOptions& options) {
  const std::vector<int> partner = pair_conjugates(model.discrete_eigs, options.pair_rel_tol);
  std::vector<ModeSummary> out(static_cast<std::size_t>(model.rank));
  for (int k = 0; k < model.rank; ++k) {
    ModeSummary& s = out[static_cast<std::size_t>(k)];
    s.index = k;
    s.eigenvalue = model.discrete_eigs(k);
    s.omega = model.continuous_eigs(k);
    s.power = mode_power(model, k);
    s.persistence = classify_eigenvalue(s.eigenvalue, options.persistence_tol);
    s.pair_index = partner[static_cast<std::size_t>(k)];
    if (model.mode_excluded(k)) {
      // lambda == 0: no continuous-time behavior to summarize.
      s.period_s = std::numeric_limits<double>::infinity();
      continue;
    }
    s.period_s = mode_period(s.omega);
    const WavelengthEstimate wl = mode_wavelength(model, k, options.y_index);
    s.wavelength_m = wl.spectral_m;
    s.wavelength_hilbert_m = wl.hilbert_m;
    s.speed_m_per_s = mode_speed(s);
  }
  return out;
}

std::vector<std::size_t> bin_spectrum(const std::vector<ModeSummary>& summaries,
                                      const std::vector<double>& edges_s) {
  if (summaries.empty()) raise(ErrorCode::EmptySpectrum, "no modes to bin");
  if (edges_s.empty()) raise(ErrorCode::InvalidArgument, "need at least one period edge");
  for (std::size_t i = 1; i < edges_s.size(); ++i) {
    if (!(edges_s[i] > edges_s[i - 1])) {
      raise(ErrorCode::InvalidArgument, "period edges must be strictly ascending");
    }
  }

  std::vector<std::size_t> counts(edges_s.size() + 1, 0);
  for (const ModeSummary& s : summaries) {
    if (s.pair_index >= 0 && s.pair_index < s.index) continue;  // count each pair once
    std::size_t bin = edges_s.size();  // infinite periods land here
    for (std::size_t b = 0; b < edges_s.size(); ++b) {
      if (s.period_s < edges_s[b]) {
        bin = b;
        break;
      }
    }
    ++counts[bin];
  }
  return counts;
}

std::vector<double> default_region_edges() { return {3.9 * 60.0, 6.0 * 60.0, 60.0 * 60.0}; }

void write_mode_table_csv(const std::vector<ModeSummary>& summaries, const std::string& path) {
  std::ostringstream out;
  out << "index,re_lambda,im_lambda,abs_lambda,re_omega,im_omega,period_s,power,"
         "persistence,wavelength_m,speed_m_per_s,pair_index\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const ModeSummary& s : summaries) {
    out << s.index << ',' << csv_number(s.eigenvalue.real()) << ','
        << csv_number(s.eigenvalue.imag()) << ',' << csv_number(std::abs(s.eigenvalue)) << ','
        << csv_number(s.omega.real()) << ',' << csv_number(s.omega.imag()) << ','
        << csv_number(s.period_s) << ',' << csv_number(s.power) << ','
        << persistence_name(s.persistence) << ','
        << csv_number(s.wavelength_m.value_or(nan)) << ','
        << csv_number(s.speed_m_per_s.value_or(nan)) << ',' << s.pair_index << '\n';
  }
  detail::write_text_file(path, out.str());
}

void write_mode_table_json(const std::vector<ModeSummary>& summaries, const std::string& path) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  detail::JsonWriter w;
  w.begin_array();
  for (const ModeSummary& s : summaries) {
    w.begin_object();
    w.kv("index", s.index);
    w.kv("re_lambda", s.eigenvalue.real());
    w.kv("im_lambda", s.eigenvalue.imag());
    w.kv("abs_lambda", std::abs(s.eigenvalue));
    w.kv("re_omega", s.omega.real());
    w.kv("im_omega", s.omega.imag());
    w.kv("period_s", s.period_s);  // null when infinite
    w.kv("power", s.power);
    w.kv("persistence", persistence_name(s.persistence));
    w.kv("wavelength_m", s.wavelength_m.value_or(nan));
    w.kv("wavelength_hilbert_m", s.wavelength_hilbert_m.value_or(nan));
    w.kv("speed_m_per_s", s.speed_m_per_s.value_or(nan));
    w.kv("pair_index", s.pair_index);
    w.end_object();
  }
  w.end_array();
  detail::write_text_file(path, w.str() + "\n");
}

}  // namespace bedmorph
