#include "bedmorph/snapshot.hpp"

#include <cmath>
#include <string>

#include "bedmorph/errors.hpp"

namespace bedmorph {

Eigen::VectorXd vectorize(const Eigen::MatrixXd& snapshot) {
  const auto m = snapshot.rows();
  const auto n = snapshot.cols();
  Eigen::VectorXd v(m * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = snapshot(i, j);
  return v;
}

Eigen::MatrixXd unvectorize(const Eigen::VectorXd& v, std::size_t m, std::size_t n) {
  if (v.size() != static_cast<Eigen::Index>(m * n)) {
    raise(ErrorCode::ShapeMismatch,
          "vector length " + std::to_string(v.size()) + " != m*n = " + std::to_string(m * n));
  }
  Eigen::MatrixXd out(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = v(static_cast<Eigen::Index>(i * n + j));
  return out;
}

SnapshotMatrix build_snapshot_matrix(const ElevationField& field, bool remove_mean) {
  validate(field);

  const std::size_t mn = field.plane_size();
  const std::size_t p = field.nt;

  SnapshotMatrix H;
  H.m = field.nx;
  H.n = field.ny;
  H.p = p;
  H.data.resize(mn, p);
  // Snapshot storage is already in row-major vectorization order.
  for (std::size_t k = 0; k < p; ++k) {
    H.data.col(k) = Eigen::Map<const Eigen::VectorXd>(field.snapshot(k), mn);
  }

  H.mean_removed = remove_mean;
  if (remove_mean) {
    // Accumulate the mean as first snapshot + mean of deviations from it, so
    // that a field constant in time produces an exactly zero matrix.
    Eigen::VectorXd deviation_mean = Eigen::VectorXd::Zero(mn);
    for (std::size_t k = 1; k < p; ++k) deviation_mean += H.data.col(k) - H.data.col(0);
    deviation_mean /= static_cast<double>(p);
    H.mean_field = H.data.col(0) + deviation_mean;
    H.data.col(0) = -deviation_mean;
    for (std::size_t k = 1; k < p; ++k) H.data.col(k) -= H.mean_field;
    // One refinement pass keeps the row-wise mean at the fluctuation scale's
    // roundoff even when fluctuations are tiny against the mean level.
    Eigen::VectorXd residual = H.data.rowwise().mean();
    H.data.colwise() -= residual;
    H.mean_field += residual;
  } else {
    H.mean_field = Eigen::VectorXd::Zero(mn);
  }
  return H;
}

SnapshotPair split_pair(const SnapshotMatrix& H, std::size_t q) {
  if (q < 1 || q > H.p - 1) {
    raise(ErrorCode::InsufficientSnapshots,
          "need 1 <= q <= p-1 with p=" + std::to_string(H.p) +
              "; got q=" + std::to_string(q));
  }
  SnapshotPair pair;
  pair.h1 = H.data.leftCols(q);
  pair.h2 = H.data.middleCols(1, q);
  return pair;
}

std::size_t training_pair_count(double train_fraction, std::size_t p) {
  if (!(train_fraction > 0.0) || train_fraction > 1.0 || !std::isfinite(train_fraction)) {
    raise(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1]");
  }
  if (p < 2) raise(ErrorCode::InsufficientSnapshots, "need at least 2 snapshots");
  auto q = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(p)));
  if (q < 1) q = 1;
  if (q > p - 1) q = p - 1;
  return q;
}

}  // namespace bedmorph
