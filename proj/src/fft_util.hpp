#pragma once

#include <complex>
#include <span>
#include <vector>

// Thin FFTW wrappers. FFTW planning is not thread-safe, so plan creation and
// destruction are serialized behind a mutex; execution runs lock-free on
// per-call buffers.

namespace bedmorph::detail {

/// One-sided magnitude spectrum |X_k| for k = 0..n/2 of a real signal.
std::vector<double> amplitude_spectrum(std::span<const double> signal);

/// Analytic signal (signal + i * Hilbert transform) via the FFT method.
std::vector<std::complex<double>> analytic_signal(std::span<const double> signal);

/// Unwraps phase jumps larger than pi in place.
void unwrap_phase(std::vector<double>& phase);

}  // namespace bedmorph::detail
