#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "bedmorph/dmd.hpp"
#include "bedmorph/spectrum.hpp"

namespace bedmorph {

/// Transect and integration setup for the Exner flux bridge.
struct FluxConfig {
  double porosity = 0.4;             // lambda_p, in [0, 1)
  std::size_t y_index = 0;           // transect
  std::size_t x_min = 0;             // inclusive grid index range
  std::size_t x_max = 0;
  std::vector<double> times;         // evaluation times, seconds
};

enum class RankingOrder { BySpeedAscending, BySpeedDescending, ByMagnitude };

const char* ranking_order_name(RankingOrder order);

/// Trapezoidal quadrature of the complex mode profile phi_k(x, y_index) over
/// [x_min, x_max] with spacing dx. Throws DegenerateRange when the range
/// holds fewer than two points.
std::complex<double> mode_spatial_integral(const DmdModel& model, int k,
                                           std::size_t y_index,
                                           std::size_t x_min, std::size_t x_max);

/// Streamwise flux contribution of mode k at time t:
///   q_k = -(1 - porosity) * alpha_k e^{omega_k t} omega_k * integral(phi_k).
/// A conjugate pair is attributed the single real value 2*Re(q_k) (both
/// members report the same number); unpaired real modes contribute Re(q_k).
/// Throws ExcludedMode for lambda == 0 modes.
double modal_flux(const DmdModel& model, const std::vector<ModeSummary>& summaries,
                  int k, const FluxConfig& cfg, double t);

/// Net streamwise flux through the transect: sum of pair contributions in
/// ascending representative order. lambda == 0 modes are skipped and their
/// indices appended to excluded when non-null.
double net_flux(const DmdModel& model, const std::vector<ModeSummary>& summaries,
                const FluxConfig& cfg, double t, std::vector<int>* excluded = nullptr);

/// Same quantity evaluated from the time derivative of the modal expansion,
/// -(1-porosity) * trapz_x d/dt h(t), without the per-mode split. Agrees with
/// net_flux to roundoff; kept as the second algebraic route for validation.
double net_flux_from_derivative(const DmdModel& model, const FluxConfig& cfg, double t);

/// Per-pair flux attribution and cumulative contribution ranking.
/// contributors holds one representative mode index per conjugate pair (the
/// member with the lower index) plus any unpaired real modes, in ascending
/// order. per_mode is contributors x times; net its column sum in that order.
struct FluxReport {
  std::vector<int> contributors;
  Eigen::MatrixXd per_mode;            // m^2/s
  Eigen::VectorXd net;                 // m^2/s per time
  std::vector<double> magnitude;       // time-mean |flux| per contributor
  std::vector<int> ranking;            // permutation of contributor positions
  std::vector<double> cumulative_percent;  // in ranked order, last entry 100
  RankingOrder order = RankingOrder::BySpeedAscending;
  FluxConfig config;
  std::vector<int> excluded_modes;     // lambda == 0 modes skipped
};

/// Ranks pair contributions (time-mean absolute flux over cfg.times),
/// normalizes to percent and accumulates in the requested order. Undefined
/// speeds rank last for the speed orders. Throws NoContributingModes when
/// every contribution is exactly zero.
FluxReport cumulative_contribution(const DmdModel& model,
                                   const std::vector<ModeSummary>& summaries,
                                   const FluxConfig& cfg, RankingOrder order);

void write_flux_json(const FluxReport& report,
                     const std::vector<ModeSummary>& summaries,
                     const std::string& path);
/// Time series CSV: time_s, net_flux, pair_<i>_flux per contributor.
void write_flux_timeseries_csv(const FluxReport& report, const std::string& path);
/// Two-column gnuplot file: mode rank, cumulative percent.
void write_cumulative_plot(const FluxReport& report, const std::string& path);

}  // namespace bedmorph
