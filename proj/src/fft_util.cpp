#include "fft_util.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace bedmorph::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanGuard {
  fftw_plan plan = nullptr;
  ~PlanGuard() {
    if (plan) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

}  // namespace

std::vector<double> amplitude_spectrum(std::span<const double> signal) {
  const std::size_t n = signal.size();
  std::vector<double> in(signal.begin(), signal.end());
  std::vector<std::complex<double>> out(n / 2 + 1);

  PlanGuard guard;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    guard.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_ESTIMATE);
  }
  fftw_execute(guard.plan);

  std::vector<double> mag(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) mag[k] = std::abs(out[k]);
  return mag;
}

std::vector<std::complex<double>> analytic_signal(std::span<const double> signal) {
  const std::size_t n = signal.size();
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = {signal[i], 0.0};

  PlanGuard fwd, inv;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd.plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(buf.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    inv.plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(buf.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  fftw_execute(fwd.plan);
  // Keep DC and (for even n) Nyquist, double the positive band, zero the
  // negative band.
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < (n + 1) / 2; ++k) buf[k] *= 2.0;
  for (std::size_t k = half + 1; k < n; ++k) buf[k] = {0.0, 0.0};
  fftw_execute(inv.plan);

  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : buf) v *= scale;
  return buf;
}

void unwrap_phase(std::vector<double>& phase) {
  constexpr double pi = std::numbers::pi;
  double offset = 0.0;
  for (std::size_t i = 1; i < phase.size(); ++i) {
    const double raw = phase[i] + offset;
    double jump = raw - phase[i - 1];
    if (jump > pi) {
      const double turns = std::floor((jump + pi) / (2.0 * pi));
      offset -= turns * 2.0 * pi;
    } else if (jump < -pi) {
      const double turns = std::floor((-jump + pi) / (2.0 * pi));
      offset += turns * 2.0 * pi;
    }
    phase[i] += offset;
  }
}

}  // namespace bedmorph::detail
