#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "ppenkf/scenario.hpp"

namespace ppenkf {

/// Hydraulic conductivity [m/s] from log10 permeability [log10 m^2]:
/// K_h = 10^log10_k * rho g / mu.
double permeability_to_conductivity(double log10_k, const Fluid& fluid);

Eigen::VectorXd permeability_to_conductivity(const Eigen::VectorXd& log10_k, const Fluid& fluid);

/// Implicit (backward Euler) finite-volume solver for transient saturated
/// flow S_s dh/dt = div(K grad h) on a scenario's grid, with harmonic-mean
/// interface conductivities, fixed-head edges applied over half-cell
/// distances, and pinned fixed-head cells. The system matrix depends only on
/// the conductivity field and dt, so one factorization serves all steps of a
/// simulation window.
class FlowSolver {
 public:
  FlowSolver(const Scenario& scenario, const Eigen::VectorXd& conductivity, double dt_seconds);

  /// Advances the head field by one implicit step.
  Eigen::VectorXd step(const Eigen::VectorXd& head) const;

  /// Face volumetric fluxes [m^3/s] for a head field, positive toward +x/+y.
  /// qx(f + j*(nx+1)) crosses the face between cells (f-1,j) and (f,j);
  /// boundary faces carry the half-cell Dirichlet flux or zero for no-flow.
  struct FaceFluxes {
    Eigen::VectorXd qx;  // (nx+1) * ny
    Eigen::VectorXd qy;  // nx * (ny+1)
  };
  FaceFluxes fluxes(const Eigen::VectorXd& head) const;

  /// Max-abs mass-balance residual of a completed step, relative to the
  /// largest flux term; fixed-head cells are excluded.
  double mass_balance_residual(const Eigen::VectorXd& head_old,
                               const Eigen::VectorXd& head_new) const;

  double dt_seconds() const { return dt_; }
  const Scenario& scenario() const { return scenario_; }

 private:
  Scenario scenario_;
  Eigen::VectorXd conductivity_;
  double dt_;
  Eigen::VectorXd storage_;        // S_s * V / dt per cell, zero for pinned cells
  Eigen::VectorXd rhs_fixed_;      // boundary and pinned-cell contributions
  std::vector<bool> pinned_;
  Eigen::VectorXd pinned_value_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

}  // namespace ppenkf
