#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bedmorph/dmd.hpp"

namespace bedmorph {

enum class Persistence { Decaying, Persistent, Growing };

const char* persistence_name(Persistence p);

/// Per-mode spectral summary. period_s is +infinity for non-oscillatory
/// modes; wavelength and speed are nullopt when undefined; pair_index is the
/// conjugate partner's mode index, -1 for unpaired (real) eigenvalues.
struct ModeSummary {
  int index = 0;
  std::complex<double> eigenvalue;
  std::complex<double> omega;            // 1/seconds
  double period_s = 0.0;
  double power = 0.0;
  Persistence persistence = Persistence::Persistent;
  std::optional<double> wavelength_m;    // primary (spectral-peak) estimate
  std::optional<double> wavelength_hilbert_m;
  std::optional<double> speed_m_per_s;
  int pair_index = -1;
};

/// |lambda| < 1-tol -> Decaying, |lambda| > 1+tol -> Growing, else Persistent.
Persistence classify_eigenvalue(std::complex<double> lambda, double tol = 0.01);

/// 2*pi/|Im omega|; +infinity when Im omega == 0.
double mode_period(std::complex<double> omega);

/// power_k = |alpha_k|^2 * ||phi_k||_2^2; invariant under the (c*phi, alpha/c)
/// rescaling ambiguity of the mode/amplitude factorization.
double mode_power(const DmdModel& model, int k);

/// Nearest-conjugate matching at relative tolerance rel_tol. Returns the
/// partner index per mode, -1 where unpaired.
std::vector<int> pair_conjugates(const Eigen::VectorXcd& eigenvalues, double rel_tol = 1e-6);

struct WavelengthEstimate {
  std::optional<double> spectral_m;  // peak of the windowed spatial amplitude spectrum
  std::optional<double> hilbert_m;   // 2*pi / median unwrapped-phase derivative
};

/// Wavelength of Re(phi_k) along the streamwise transect at y_index.
/// Undefined when the spectral peak is the DC bin or the profile's spatial
/// variance is below 1e-14.
WavelengthEstimate mode_wavelength(const DmdModel& model, int k, std::size_t y_index);

/// wavelength / period; nullopt when either factor is undefined or the
/// period is infinite.
std::optional<double> mode_speed(const ModeSummary& summary);

struct SpectrumOptions {
  double persistence_tol = 0.01;
  double pair_rel_tol = 1e-6;
  std::size_t y_index = 0;  // transect used for wavelength estimation
};

std::vector<ModeSummary> summarize_modes(const DmdModel& model, const SpectrumOptions& options);

/// Histogram of mode periods over half-open bins [0,e1), [e1,e2), ..., [em,inf).
/// Conjugate pairs are counted once; infinite periods land in the last bin.
/// Throws EmptySpectrum for an empty summary list.
std::vector<std::size_t> bin_spectrum(const std::vector<ModeSummary>& summaries,
                                      const std::vector<double>& edges_s);

/// {3.9 min, 6 min, 60 min} in seconds -> four bins.
std::vector<double> default_region_edges();

// Mode table emission. CSV columns: index, re_lambda, im_lambda, abs_lambda,
// re_omega, im_omega, period_s, power, persistence, wavelength_m,
// speed_m_per_s, pair_index. Undefined entries are written as nan, infinite
// periods as inf; the JSON variant uses null for both.
void write_mode_table_csv(const std::vector<ModeSummary>& summaries, const std::string& path);
void write_mode_table_json(const std::vector<ModeSummary>& summaries, const std::string& path);

}  // namespace bedmorph
