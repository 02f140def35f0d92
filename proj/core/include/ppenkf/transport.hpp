#pragma once

#include <Eigen/Core>

#include "ppenkf/flow.hpp"

namespace ppenkf {

/// First-order upwind explicit advection of the concentration field by the
/// Darcy fluxes of the (already advanced) head field, divided by porosity.
/// Sub-steps internally so the per-cell inflow Courant number stays <= 0.9;
/// the scheme is a convex combination of old values and inflow boundary
/// concentrations, so the discrete maximum principle holds.
Eigen::VectorXd step_tracer(const Eigen::VectorXd& conc, const Eigen::VectorXd& head,
                            const FlowSolver& flow, double dt_seconds);

inline constexpr double kCflLimit = 0.9;

}  // namespace ppenkf
