#pragma once

#include <Eigen/Core>

#include "ppenkf/observation.hpp"
#include "ppenkf/state.hpp"

namespace ppenkf {

/// Mean and covariance of a Gaussian state belief (the non-ensemble filters;
/// small instances and oracles).
struct KalmanBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

inline constexpr double kInnovationJitter = 1e-10;
inline constexpr double kInnovationRcondFloor = 1e-12;

/// Solves (S + R) X = B where S is a symmetric PSD innovation matrix and R a
/// positive diagonal, adding the diagonal jitter 1e-10 * trace/n once if the
/// factorization fails or is conditioned worse than 1e12.
Eigen::MatrixXd solve_innovation(const Eigen::MatrixXd& s, const Eigen::VectorXd& r_diag,
                                 const Eigen::MatrixXd& b);

/// Classical Kalman update of mean and covariance. The posterior covariance
/// is symmetrized; its trace never exceeds the prior's.
KalmanBelief kalman_update(const KalmanBelief& belief, const ObservationBatch& obs);

/// Covariance among simulated measurements with every block touching
/// non-pilot parameters removed before applying H. Equals H P H^T whenever H
/// touches only pilot parameters and dynamic variables.
Eigen::MatrixXd compute_p_yppy(const Eigen::MatrixXd& covariance, const ObservationOperator& h,
                               const StateLayout& layout);

/// Pilot point Kalman filter update: the Kalman update restricted to pilot
/// parameters and dynamic variables, followed by kriging interpolation of
/// both the mean update and the covariance update to non-pilot parameters.
/// Requires a measurement operator touching only pilot/dynamic entries.
KalmanBelief ppkf_update(const KalmanBelief& belief, const ObservationBatch& obs,
                         const StateLayout& layout, const Eigen::MatrixXd& prior_rp);

}  // namespace ppenkf
