#pragma once

#include <Eigen/Core>

#include "ppenkf/flow.hpp"
#include "ppenkf/scenario.hpp"
#include "ppenkf/state.hpp"

namespace ppenkf {

/// The nonlinear forward operator: transient flow (+ tracer advection) over
/// the time-step lattice of a scenario. Parameter entries pass through
/// unchanged; dynamic entries are advanced.
class ForwardModel {
 public:
  ForwardModel(Scenario scenario, StateLayout layout);

  const Scenario& scenario() const { return scenario_; }
  const StateLayout& layout() const { return layout_; }
  double step_days() const { return scenario_.step_days(); }

  /// Full state for a parameter field with undisturbed initial dynamics.
  StateVector initial_state(const Eigen::VectorXd& param_field) const;

  /// Advances the dynamic entries from t_start to t_end (days); both times
  /// must lie on the step lattice. The flow matrix is factorized once per
  /// call and reused for all steps.
  StateVector simulate_window(const StateVector& state, double t_start_days,
                              double t_end_days) const;

  Eigen::VectorXd conductivity(const StateVector& state) const;

  /// Step index for an on-lattice time; throws for off-lattice times.
  int lattice_index(double time_days) const;

 private:
  Scenario scenario_;
  StateLayout layout_;
};

/// Simulated measurements at a scheduled time: linear extraction of the
/// scheduled (cell, kind) dynamic entries. Throws for unscheduled times.
Eigen::VectorXd observe(const StateVector& state, const ObservationSchedule& schedule,
                        double time_days, const StateLayout& layout);

}  // namespace ppenkf
