#include "ppenkf/observation.hpp"

#include <stdexcept>

namespace ppenkf {

Eigen::VectorXd ObservationOperator::apply(const Eigen::VectorXd& state) const {
  if (state.size() != n_state)
    throw std::invalid_argument("ObservationOperator::apply: state length mismatch");
  Eigen::VectorXd out(n_m());
  for (int m = 0; m < n_m(); ++m) out[m] = state[indices[m]];
  return out;
}

Eigen::MatrixXd ObservationOperator::apply_ensemble(const Eigen::MatrixXd& members) const {
  if (members.rows() != n_state)
    throw std::invalid_argument("ObservationOperator::apply_ensemble: state length mismatch");
  Eigen::MatrixXd out(n_m(), members.cols());
  for (int m = 0; m < n_m(); ++m) out.row(m) = members.row(indices[m]);
  return out;
}

Eigen::MatrixXd ObservationOperator::dense() const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_m(), n_state);
  for (int m = 0; m < n_m(); ++m) h(m, indices[m]) = 1.0;
  return h;
}

bool ObservationOperator::touches_only_pilot_dynamic(const StateLayout& layout) const {
  for (int idx : indices)
    if (layout.is_param_index(idx) && !layout.is_pilot_index(idx)) return false;
  return true;
}

ObservationOperator make_observation_operator(const ObservationSchedule& schedule,
                                              const StateLayout& layout) {
  ObservationOperator h;
  h.n_state = layout.n_s();
  h.indices.reserve(schedule.points.size());
  for (const auto& p : schedule.points) h.indices.push_back(layout.dynamic_index(p.kind, p.cell));
  return h;
}

ObservationBatch make_observation_batch(Eigen::VectorXd d, Eigen::VectorXd r_diag,
                                        ObservationOperator h, int n_e,
                                        const RngSpec& perturbation_stream) {
  if (d.size() != h.n_m() || r_diag.size() != h.n_m())
    throw std::invalid_argument("make_observation_batch: shape mismatch");
  if ((r_diag.array() <= 0.0).any())
    throw std::invalid_argument("make_observation_batch: R must have positive diagonal");
  ObservationBatch batch;
  batch.d = std::move(d);
  batch.r_diag = std::move(r_diag);
  batch.h = std::move(h);
  const Eigen::VectorXd sigma = batch.r_diag.cwiseSqrt();
  batch.d_perturbed.resize(batch.h.n_m(), n_e);
  for (int i = 0; i < n_e; ++i) {
    Rng rng(perturbation_stream.with_member(static_cast<std::uint32_t>(i)));
    batch.d_perturbed.col(i) = batch.d + sigma.cwiseProduct(rng.normal_vector(batch.h.n_m()));
  }
  return batch;
}

}  // namespace ppenkf
