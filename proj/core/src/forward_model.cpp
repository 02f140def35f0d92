#include "ppenkf/forward_model.hpp"

#include <cmath>
#include <stdexcept>

#include "ppenkf/transport.hpp"

namespace ppenkf {

namespace {
constexpr double kSecondsPerDay = 86400.0;
}

ForwardModel::ForwardModel(Scenario scenario, StateLayout layout)
    : scenario_(std::move(scenario)), layout_(std::move(layout)) {
  if (layout_.grid() != scenario_.grid)
    throw std::invalid_argument("ForwardModel: layout grid differs from scenario grid");
  for (DynamicKind kind : scenario_.dynamic_kinds())
    if (!layout_.has_kind(kind))
      throw std::invalid_argument("ForwardModel: layout lacks dynamic kind " + to_string(kind));
}

StateVector ForwardModel::initial_state(const Eigen::VectorXd& param_field) const {
  StateVector state(layout_.n_s());
  state.head(layout_.n_p() + layout_.n_r()) = layout_.param_state_from_field(param_field);
  const int n_g = layout_.grid().n_cells();
  state.segment(layout_.dynamic_index(DynamicKind::Head, 0), n_g).setConstant(
      scenario_.initial_head);
  if (scenario_.has_tracer)
    state.segment(layout_.dynamic_index(DynamicKind::Concentration, 0), n_g)
        .setConstant(scenario_.initial_concentration);
  return state;
}

Eigen::VectorXd ForwardModel::conductivity(const StateVector& state) const {
  return permeability_to_conductivity(layout_.param_field_from_state(state), scenario_.fluid);
}

int ForwardModel::lattice_index(double time_days) const {
  const double steps = time_days / step_days();
  const long k = std::lround(steps);
  if (k < 0 || k > scenario_.n_steps ||
      std::abs(steps - static_cast<double>(k)) > 1e-9 * std::max(1.0, steps))
    throw std::invalid_argument("time " + std::to_string(time_days) +
                                " days is not on the simulation step lattice");
  return static_cast<int>(k);
}

StateVector ForwardModel::simulate_window(const StateVector& state, double t_start_days,
                                          double t_end_days) const {
  if (state.size() != layout_.n_s())
    throw std::invalid_argument("simulate_window: state length mismatch");
  const int k0 = lattice_index(t_start_days);
  const int k1 = lattice_index(t_end_days);
  if (k1 < k0) throw std::invalid_argument("simulate_window: t_end before t_start");
  if (k1 == k0) return state;

  const int n_g = layout_.grid().n_cells();
  const double dt_sec = step_days() * kSecondsPerDay;
  const FlowSolver flow(scenario_, conductivity(state), dt_sec);

  StateVector out = state;
  Eigen::VectorXd head = out.segment(layout_.dynamic_index(DynamicKind::Head, 0), n_g);
  Eigen::VectorXd conc;
  if (scenario_.has_tracer)
    conc = out.segment(layout_.dynamic_index(DynamicKind::Concentration, 0), n_g);

  for (int k = k0; k < k1; ++k) {
    head = flow.step(head);
    if (scenario_.has_tracer) conc = step_tracer(conc, head, flow, dt_sec);
  }
  out.segment(layout_.dynamic_index(DynamicKind::Head, 0), n_g) = head;
  if (scenario_.has_tracer)
    out.segment(layout_.dynamic_index(DynamicKind::Concentration, 0), n_g) = conc;
  return out;
}

Eigen::VectorXd observe(const StateVector& state, const ObservationSchedule& schedule,
                        double time_days, const StateLayout& layout) {
  bool scheduled = false;
  for (double t : schedule.times_days)
    if (std::abs(t - time_days) <= 1e-9 * std::max(1.0, std::abs(t))) scheduled = true;
  if (!scheduled)
    throw std::invalid_argument("observe: time " + std::to_string(time_days) +
                                " days is not a scheduled observation time");
  Eigen::VectorXd out(schedule.n_m());
  for (int m = 0; m < schedule.n_m(); ++m)
    out[m] = state[layout.dynamic_index(schedule.points[m].kind, schedule.points[m].cell)];
  return out;
}

}  // namespace ppenkf
