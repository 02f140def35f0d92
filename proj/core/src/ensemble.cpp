#include "ppenkf/ensemble.hpp"

#include <stdexcept>

namespace ppenkf {

Ensemble::Ensemble(StateLayout layout_, Eigen::MatrixXd members_)
    : layout(std::move(layout_)), members(std::move(members_)) {
  if (members.rows() != layout.n_s())
    throw std::invalid_argument("Ensemble: member length " + std::to_string(members.rows()) +
                                " != layout n_s " + std::to_string(layout.n_s()));
  if (members.cols() < 2)
    throw std::invalid_argument("Ensemble: need at least 2 members, got " +
                                std::to_string(members.cols()));
}

Eigen::MatrixXd Ensemble::anomalies() const {
  return members.colwise() - mean().eval();
}

Eigen::MatrixXd Ensemble::parameter_fields() const {
  const int n_param = layout.n_p() + layout.n_r();
  Eigen::MatrixXd fields(layout.grid().n_cells(), members.cols());
  for (int k = 0; k < n_param; ++k) fields.row(layout.param_cell(k)) = members.row(k);
  return fields;
}

EnsembleMoments ensemble_moments(const Ensemble& ens) {
  if (ens.size() < 2) throw std::invalid_argument("ensemble_moments: n_e < 2");
  EnsembleMoments m;
  m.mean = ens.mean();
  const Eigen::MatrixXd a = ens.members.colwise() - m.mean;
  m.covariance = (a * a.transpose()) / static_cast<double>(ens.size() - 1);
  return m;
}

}  // namespace ppenkf
