#pragma once

#include <Eigen/Core>

#include "ppenkf/state.hpp"

namespace ppenkf {

/// Ensemble of state-vector realizations sharing one layout. Members are the
/// columns of an n_s x n_e matrix. Immutable by convention: analysis
/// operations construct new ensembles instead of mutating their input.
struct Ensemble {
  StateLayout layout;
  Eigen::MatrixXd members;  // n_s x n_e

  Ensemble() = default;
  Ensemble(StateLayout layout_, Eigen::MatrixXd members_);

  int size() const { return static_cast<int>(members.cols()); }
  Eigen::VectorXd member(int i) const { return members.col(i); }

  Eigen::VectorXd mean() const { return members.rowwise().mean(); }

  /// Member deviations from the ensemble mean (n_s x n_e).
  Eigen::MatrixXd anomalies() const;

  /// Parameter block (pilot + non-pilot rows), n_p + n_r rows.
  Eigen::MatrixXd parameter_block() const {
    return members.topRows(layout.n_p() + layout.n_r());
  }

  /// Per-cell parameter fields, one column per member (n_cells x n_e).
  Eigen::MatrixXd parameter_fields() const;
};

struct EnsembleMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // n_s x n_s, unbiased (n_e - 1 divisor)
};

/// Sample mean and covariance with the n_e - 1 divisor. The full matrix form
/// exists for tests and small instances; analysis paths use cross-covariance
/// blocks only.
EnsembleMoments ensemble_moments(const Ensemble& ens);

}  // namespace ppenkf
