#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "bedmorph/elevation_field.hpp"

namespace bedmorph {

/// Vectorized snapshot stack H in R^(mn x p). Column k is the row-major
/// vectorization of snapshot k, minus the temporal mean when mean_removed.
struct SnapshotMatrix {
  Eigen::MatrixXd data;              // mn x p
  std::size_t m = 0;                 // grid rows (streamwise)
  std::size_t n = 0;                 // grid columns (spanwise)
  std::size_t p = 0;                 // snapshot count
  bool mean_removed = false;
  Eigen::VectorXd mean_field;        // length mn, all-zero when !mean_removed

  std::size_t mn() const { return m * n; }
};

/// Row-major stacking: entry (i, j) of an m x n snapshot maps to index i*n + j.
Eigen::VectorXd vectorize(const Eigen::MatrixXd& snapshot);

/// Exact inverse of vectorize.
Eigen::MatrixXd unvectorize(const Eigen::VectorXd& v, std::size_t m, std::size_t n);

/// Stacks every snapshot of the field into columns. With remove_mean the
/// temporal mean field is stored and subtracted from every column; the mean
/// is accumulated against the first snapshot so that a field constant in time
/// yields an exactly zero data matrix.
SnapshotMatrix build_snapshot_matrix(const ElevationField& field, bool remove_mean);

struct SnapshotPair {
  Eigen::MatrixXd h1;                // columns 1..q
  Eigen::MatrixXd h2;                // columns 2..q+1 (one-step shift)
};

/// Splits H into the training pair (H1, H2) from its first q+1 columns.
/// Throws InsufficientSnapshots unless 1 <= q <= p-1.
SnapshotPair split_pair(const SnapshotMatrix& H, std::size_t q);

/// Number of training pairs for a given fraction of p snapshots:
/// q = round(fraction*p) clamped to [1, p-1]. fraction must lie in (0, 1].
std::size_t training_pair_count(double train_fraction, std::size_t p);

}  // namespace bedmorph
