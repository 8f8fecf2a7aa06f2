#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "bedmorph/elevation_field.hpp"
#include "bedmorph/snapshot.hpp"

namespace bedmorph {

inline constexpr int kFullRank = -1;

enum class AmplitudeMethod {
  InitialSnapshot,           // alpha = pinv(Phi) h1
  LeastSquaresAllSnapshots,  // extension: alpha fitted over every training column
};

struct DmdOptions {
  int rank = kFullRank;            // kFullRank keeps every direction above the cutoff
  double sv_rel_cutoff = 1e-12;    // singular values below cutoff*sigma_1 are dropped
  AmplitudeMethod amplitude_method = AmplitudeMethod::InitialSnapshot;
};

/// Exact-DMD factorization of a snapshot pair. Modes are stored in descending
/// power order (power = |alpha_k|^2 * ||phi_k||^2). For real input data the
/// eigenvalues come in exact conjugate pairs. A zero discrete eigenvalue has
/// no continuous-time counterpart; its omega entry is NaN and the mode is
/// excluded from period and flux analysis.
struct DmdModel {
  Eigen::MatrixXcd modes;            // mn x r, columns phi_k
  Eigen::VectorXcd discrete_eigs;    // lambda_k
  Eigen::VectorXcd continuous_eigs;  // omega_k = log(lambda_k)/dt, 1/seconds
  Eigen::VectorXcd amplitudes;       // alpha_k
  Eigen::VectorXd mean_field;        // length mn, zero when the mean was kept
  double dt = 0.0;                   // sampling interval, seconds
  int rank = 0;                      // r
  std::size_t grid_m = 0;            // streamwise points of the source grid
  std::size_t grid_n = 0;            // spanwise points
  double dx = 0.0;
  double dy = 0.0;
  std::size_t train_count = 0;       // q, number of training columns

  std::size_t state_size() const { return grid_m * grid_n; }
  bool mode_excluded(int k) const { return discrete_eigs(k) == std::complex<double>(0.0, 0.0); }
};

struct DmdInfo {
  Eigen::VectorXd singular_values;      // full spectrum of H1
  std::size_t q = 0;
  std::vector<int> zero_eigenvalue_modes;  // indices with lambda == 0 (post-sort)
};

struct GridShape {
  std::size_t m = 0;
  std::size_t n = 0;
  double dx = 0.0;
  double dy = 0.0;
};

/// Exact DMD of the pair H2 ~ A H1: thin SVD of H1, reduced operator
/// Atilde = Ur^T H2 Vr Sr^-1, eigendecomposition, full-space modes
/// Phi = H2 Vr Sr^-1 W, amplitudes from the first training column.
/// Throws RankDeficient when an explicit rank exceeds the number of singular
/// values above the cutoff. A zero H1 yields an empty (rank 0) model.
DmdModel compute_dmd(const Eigen::Ref<const Eigen::MatrixXd>& H1,
                     const Eigen::Ref<const Eigen::MatrixXd>& H2,
                     double dt,
                     const Eigen::VectorXd& mean_field,
                     const GridShape& grid,
                     const DmdOptions& options = {},
                     DmdInfo* info = nullptr);

/// Convenience wrapper: snapshot matrix, split and DMD in one step.
DmdModel dmd_from_field(const ElevationField& field,
                        double train_fraction,
                        bool remove_mean,
                        const DmdOptions& options = {},
                        DmdInfo* info = nullptr);

/// h(t) = mean + Re(Phi (e^{omega t} . alpha)), reshaped to the grid.
/// The discarded imaginary magnitude (inf-norm) is reported through
/// imag_residual when non-null.
Eigen::MatrixXd reconstruct(const DmdModel& model, double t, double* imag_residual = nullptr);
Eigen::VectorXd reconstruct_vec(const DmdModel& model, double t, double* imag_residual = nullptr);

struct ReconstructedSeries {
  ElevationField field;
  bool uniform_times = true;  // false when the requested times are not equispaced
};

/// Stacks reconstructions at the given ascending times into a field; dt is
/// inferred from the first gap and uniform_times records whether every gap
/// matches it.
ReconstructedSeries reconstruct_series(const DmdModel& model, const std::vector<double>& times);

}  // namespace bedmorph
