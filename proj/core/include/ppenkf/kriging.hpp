#pragma once

#include <Eigen/Core>

#include "ppenkf/state.hpp"

namespace ppenkf {

/// Solves A X = B for symmetric positive (semi)definite A with an additive
/// diagonal jitter of `relative_jitter * trace(A) / n`. The jitter keeps the
/// solve defined when A is rank deficient, e.g. an ensemble covariance with
/// fewer members than pilot points; one retry with 10x jitter is attempted
/// before failing.
Eigen::MatrixXd solve_spd_jittered(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                   double relative_jitter);

/// Kriging interpolation operator mapping updates of (pilot parameters,
/// dynamic variables) to full-state updates. Pilot and dynamic rows are
/// identity blocks; non-pilot rows carry the weights P_rp0 * P_pp^-1.
class InterpolationOperator {
 public:
  InterpolationOperator() = default;
  InterpolationOperator(Eigen::MatrixXd weights, int n_p, int n_r, int n_d);

  /// Applies the operator to one restricted update vector of length n_p+n_d.
  Eigen::VectorXd apply(const Eigen::VectorXd& update_pd) const;

  /// Applies the operator to one restricted update per column (n_p+n_d x k).
  Eigen::MatrixXd apply(const Eigen::MatrixXd& updates_pd) const;

  /// Non-pilot block only: weights * pilot updates.
  Eigen::MatrixXd nonpilot_update(const Eigen::MatrixXd& pilot_updates) const {
    return weights_ * pilot_updates;
  }

  const Eigen::MatrixXd& weights() const { return weights_; }

  /// Dense n_s x (n_p + n_d) matrix form, for tests and small instances.
  Eigen::MatrixXd assemble() const;

  int n_p() const { return n_p_; }
  int n_r() const { return n_r_; }
  int n_d() const { return n_d_; }

 private:
  Eigen::MatrixXd weights_;  // n_r x n_p
  int n_p_ = 0, n_r_ = 0, n_d_ = 0;
};

inline constexpr double kKrigingJitter = 1e-8;

/// Builds the operator from the fixed prior cross covariance and a (possibly
/// ensemble-estimated, possibly singular) pilot-pilot covariance.
InterpolationOperator build_interpolation_operator(const Eigen::MatrixXd& prior_rp,
                                                   const Eigen::MatrixXd& pilot_cov,
                                                   const StateLayout& layout);

}  // namespace ppenkf
