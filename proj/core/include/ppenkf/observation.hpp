#pragma once

#include <Eigen/Core>
#include <vector>

#include "ppenkf/rng.hpp"
#include "ppenkf/scenario.hpp"
#include "ppenkf/state.hpp"

namespace ppenkf {

/// Linear extraction operator: measurement m reads state entry indices[m].
struct ObservationOperator {
  std::vector<int> indices;
  int n_state = 0;

  int n_m() const { return static_cast<int>(indices.size()); }

  Eigen::VectorXd apply(const Eigen::VectorXd& state) const;

  /// One column per member: n_m x n_e.
  Eigen::MatrixXd apply_ensemble(const Eigen::MatrixXd& members) const;

  Eigen::MatrixXd dense() const;

  /// True when every measured entry is a pilot parameter or dynamic variable
  /// (the exactness condition under which P_yppy equals P_yy).
  bool touches_only_pilot_dynamic(const StateLayout& layout) const;
};

ObservationOperator make_observation_operator(const ObservationSchedule& schedule,
                                              const StateLayout& layout);

/// One assimilation batch: measurements d, diagonal noise covariance R, the
/// extraction operator, and the member-wise perturbed copies d_i = d + eps_i
/// with eps_i ~ N(0, R) drawn from per-member streams.
struct ObservationBatch {
  Eigen::VectorXd d;
  Eigen::VectorXd r_diag;  // positive noise variances
  ObservationOperator h;
  Eigen::MatrixXd d_perturbed;  // n_m x n_e
};

ObservationBatch make_observation_batch(Eigen::VectorXd d, Eigen::VectorXd r_diag,
                                        ObservationOperator h, int n_e,
                                        const RngSpec& perturbation_stream);

}  // namespace ppenkf
