#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "ppenkf/ensemble.hpp"
#include "ppenkf/scenario.hpp"

namespace ppenkf {

/// Root mean square difference between an estimated mean field and the
/// reference field across grid cells.
double compute_rmse(const Eigen::VectorXd& mean_field, const Eigen::VectorXd& truth_field);

/// Overall ensemble standard deviation: square root of the domain mean of the
/// per-cell sample variances (n_e - 1 divisor). `parameter_fields` holds one
/// member field per column.
double compute_overall_std(const Eigen::MatrixXd& parameter_fields);

/// Pearson correlation between the observed variable at one location and the
/// log-permeability at every grid cell, estimated from the ensemble.
/// Degenerate entries (zero variance on either side) are set to 0.
Eigen::VectorXd compute_correlation_field(const Ensemble& ens, const ObservationPoint& point);

/// RMSE between one correlation field and its reference.
double correlation_rmse(const Eigen::VectorXd& field, const Eigen::VectorXd& reference);

/// RMSE pooled over several correlation fields (one per observation point).
double correlation_rmse(const std::vector<Eigen::VectorXd>& fields,
                        const std::vector<Eigen::VectorXd>& reference);

/// Average rank per method over a shared list of cells: rank 1 is the
/// smallest value in a cell, ties share the mean of their tied ranks. Every
/// method must supply a finite value for every cell.
std::map<std::string, double> rank_methods(
    const std::map<std::string, std::vector<double>>& values_per_method);

}  // namespace ppenkf
