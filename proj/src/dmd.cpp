#include "bedmorph/dmd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include "bedmorph/errors.hpp"

namespace bedmorph {

namespace {

using Complex = std::complex<double>;

Eigen::VectorXcd amplitudes_initial_snapshot(const Eigen::MatrixXcd& modes,
                                             const Eigen::VectorXd& h1) {
  // alpha = pinv(Phi) h1 as a least-squares solve; COD handles rank
  // deficiency in Phi without forming the pseudo-inverse.
  return modes.completeOrthogonalDecomposition().solve(h1.cast<Complex>().eval());
}

Eigen::VectorXcd amplitudes_least_squares(const Eigen::MatrixXcd& modes,
                                          const Eigen::VectorXcd& eigs,
                                          const Eigen::Ref<const Eigen::MatrixXd>& H1) {
  // Minimize sum_j ||h_j - Phi diag(alpha) t_j||^2 with t_j = lambda^(j-1):
  // (Phi*Phi o conj(T T*)) alpha = diag(Phi* H1 T*), T the Vandermonde matrix.
  const auto r = modes.cols();
  const auto q = H1.cols();
  Eigen::MatrixXcd vander(r, q);
  for (Eigen::Index k = 0; k < r; ++k) {
    Complex power(1.0, 0.0);
    for (Eigen::Index j = 0; j < q; ++j) {
      vander(k, j) = power;
      power *= eigs(k);
    }
  }
  const Eigen::MatrixXcd gram = modes.adjoint() * modes;
  const Eigen::MatrixXcd time_gram = vander * vander.adjoint();
  const Eigen::MatrixXcd lhs = gram.cwiseProduct(time_gram.conjugate());
  const Eigen::VectorXcd rhs =
      (modes.adjoint() * H1.cast<Complex>() * vander.adjoint()).diagonal();
  return lhs.fullPivLu().solve(rhs);
}

}  // namespace

DmdModel compute_dmd(const Eigen::Ref<const Eigen::MatrixXd>& H1,
                     const Eigen::Ref<const Eigen::MatrixXd>& H2,
                     double dt,
                     const Eigen::VectorXd& mean_field,
                     const GridShape& grid,
                     const DmdOptions& options,
                     DmdInfo* info) {
  const Eigen::Index mn = H1.rows();
  const Eigen::Index q = H1.cols();
  if (H2.rows() != mn || H2.cols() != q) {
    raise(ErrorCode::ShapeMismatch, "H1 and H2 must share the same shape");
  }
  if (q < 1) raise(ErrorCode::InsufficientSnapshots, "empty snapshot pair");
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "dt must be positive");
  if (mean_field.size() != mn) {
    raise(ErrorCode::ShapeMismatch, "mean field length does not match state size");
  }
  if (static_cast<Eigen::Index>(grid.m * grid.n) != mn) {
    raise(ErrorCode::ShapeMismatch, "grid shape does not match state size");
  }

  // Backward-stable thin SVD of the tall-and-skinny H1; the Gram-matrix
  // shortcut would square the condition number and is deliberately avoided.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(H1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  Eigen::Index effective = 0;
  const double sigma1 = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = options.sv_rel_cutoff * sigma1;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++effective;
  }

  Eigen::Index r;
  if (options.rank == kFullRank) {
    r = effective;
  } else {
    if (options.rank < 1) raise(ErrorCode::InvalidArgument, "rank must be >= 1 or FULL");
    if (options.rank > effective) {
      raise(ErrorCode::RankDeficient,
            "requested rank " + std::to_string(options.rank) + " exceeds the " +
                std::to_string(effective) + " singular values above tolerance");
    }
    r = options.rank;
  }

  if (info) {
    info->singular_values = sv;
    info->q = static_cast<std::size_t>(q);
    info->zero_eigenvalue_modes.clear();
  }

  DmdModel model;
  model.dt = dt;
  model.grid_m = grid.m;
  model.grid_n = grid.n;
  model.dx = grid.dx;
  model.dy = grid.dy;
  model.mean_field = mean_field;
  model.train_count = static_cast<std::size_t>(q);
  model.rank = static_cast<int>(r);

  if (r == 0) {
    // Zero data (e.g. a mean-removed static field): no dynamics to extract.
    model.modes.resize(mn, 0);
    model.discrete_eigs.resize(0);
    model.continuous_eigs.resize(0);
    model.amplitudes.resize(0);
    return model;
  }

  const Eigen::MatrixXd Ur = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd Vr = svd.matrixV().leftCols(r);
  const Eigen::VectorXd Sr = sv.head(r);

  // H2 Vr Sr^-1 feeds both the reduced operator and the full-space modes.
  Eigen::MatrixXd h2vs = H2 * Vr;
  for (Eigen::Index c = 0; c < r; ++c) h2vs.col(c) /= Sr(c);

  const Eigen::MatrixXd a_tilde = Ur.transpose() * h2vs;

  Eigen::EigenSolver<Eigen::MatrixXd> eig(a_tilde);
  if (eig.info() != Eigen::Success) {
    raise(ErrorCode::RankDeficient, "eigendecomposition of the reduced operator failed");
  }

  Eigen::VectorXcd lambda = eig.eigenvalues();
  Eigen::MatrixXcd modes = h2vs.cast<Complex>() * eig.eigenvectors();

  Eigen::VectorXcd omega(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    if (lambda(k) == Complex(0.0, 0.0)) {
      // log(0) is undefined; the mode stays in the model but is excluded
      // from continuous-time analysis.
      omega(k) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    } else {
      omega(k) = std::log(lambda(k)) / dt;
    }
  }

  Eigen::VectorXcd alpha;
  switch (options.amplitude_method) {
    case AmplitudeMethod::InitialSnapshot:
      alpha = amplitudes_initial_snapshot(modes, H1.col(0));
      break;
    case AmplitudeMethod::LeastSquaresAllSnapshots:
      alpha = amplitudes_least_squares(modes, lambda, H1);
      break;
  }

  // Order by descending power |alpha|^2 ||phi||^2 with deterministic
  // tie-breaking (conjugate partners tie; positive-imag member first).
  Eigen::VectorXd power(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    power(k) = std::norm(alpha(k)) * modes.col(k).squaredNorm();
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (power(a) != power(b)) return power(a) > power(b);
    if (lambda(a).imag() != lambda(b).imag()) return lambda(a).imag() > lambda(b).imag();
    if (lambda(a).real() != lambda(b).real()) return lambda(a).real() > lambda(b).real();
    return a < b;
  });

  model.modes.resize(mn, r);
  model.discrete_eigs.resize(r);
  model.continuous_eigs.resize(r);
  model.amplitudes.resize(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    model.modes.col(k) = modes.col(src);
    model.discrete_eigs(k) = lambda(src);
    model.continuous_eigs(k) = omega(src);
    model.amplitudes(k) = alpha(src);
  }

  if (info) {
    for (Eigen::Index k = 0; k < r; ++k) {
      if (model.mode_excluded(static_cast<int>(k))) {
        info->zero_eigenvalue_modes.push_back(static_cast<int>(k));
      }
    }
  }
  return model;
}

DmdModel dmd_from_field(const ElevationField& field,
                        double train_fraction,
                        bool remove_mean,
                        const DmdOptions& options,
                        DmdInfo* info) {
  const SnapshotMatrix H = build_snapshot_matrix(field, remove_mean);
  const std::size_t q = training_pair_count(train_fraction, H.p);
  GridShape grid{field.nx, field.ny, field.dx, field.dy};
  return compute_dmd(H.data.leftCols(q), H.data.middleCols(1, q), field.dt, H.mean_field,
                     grid, options, info);
}

Eigen::VectorXd reconstruct_vec(const DmdModel& model, double t, double* imag_residual) {
  const auto mn = static_cast<Eigen::Index>(model.state_size());
  Eigen::VectorXcd weights(model.rank);
  for (int k = 0; k < model.rank; ++k) {
    if (model.mode_excluded(k)) {
      weights(k) = Complex(0.0, 0.0);
      continue;
    }
    weights(k) = std::exp(model.continuous_eigs(k) * t) * model.amplitudes(k);
  }
  Eigen::VectorXcd h = model.modes * weights;
  if (imag_residual) {
    *imag_residual = model.rank > 0 ? h.imag().cwiseAbs().maxCoeff() : 0.0;
  }
  Eigen::VectorXd out(mn);
  out = model.mean_field + h.real();
  return out;
}

Eigen::MatrixXd reconstruct(const DmdModel& model, double t, double* imag_residual) {
  return unvectorize(reconstruct_vec(model, t, imag_residual), model.grid_m, model.grid_n);
}

ReconstructedSeries reconstruct_series(const DmdModel& model, const std::vector<double>& times) {
  if (times.empty()) raise(ErrorCode::InvalidArgument, "times must be nonempty");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      raise(ErrorCode::InvalidArgument, "times must be strictly ascending");
    }
  }

  ReconstructedSeries series;
  ElevationField& field = series.field;
  field.nx = model.grid_m;
  field.ny = model.grid_n;
  field.nt = times.size();
  field.dx = model.dx;
  field.dy = model.dy;
  field.dt = times.size() > 1 ? times[1] - times[0] : model.dt;
  field.values.resize(field.sample_count());

  if (times.size() > 1) {
    const double dt0 = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
      const double gap = times[i + 1] - times[i];
      if (std::abs(gap - dt0) > 1e-9 * std::max(std::abs(dt0), std::abs(gap))) {
        series.uniform_times = false;
        break;
      }
    }
  }

  const std::size_t mn = model.state_size();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::VectorXd v = reconstruct_vec(model, times[k]);
    Eigen::Map<Eigen::VectorXd>(field.snapshot(k), mn) = v;
  }
  return series;
}

}  // namespace bedmorph
