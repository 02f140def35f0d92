#include "ppenkf/kalman.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

#include "ppenkf/kriging.hpp"

namespace ppenkf {

Eigen::MatrixXd solve_innovation(const Eigen::MatrixXd& s, const Eigen::VectorXd& r_diag,
                                 const Eigen::MatrixXd& b) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n || r_diag.size() != n || b.rows() != n)
    throw std::invalid_argument("solve_innovation: shape mismatch");
  Eigen::MatrixXd a = s;
  a.diagonal() += r_diag;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success || llt.rcond() < kInnovationRcondFloor) {
    a.diagonal().array() += kInnovationJitter * a.trace() / n;
    llt.compute(a);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("solve_innovation: singular innovation matrix");
  }
  return llt.solve(b);
}

KalmanBelief kalman_update(const KalmanBelief& belief, const ObservationBatch& obs) {
  const auto& h = obs.h;
  if (belief.mean.size() != h.n_state || belief.covariance.rows() != h.n_state)
    throw std::invalid_argument("kalman_update: belief/operator size mismatch");

  // P H^T and H P H^T via row/column extraction; H is a selection operator.
  Eigen::MatrixXd ph_t(h.n_state, h.n_m());
  for (int m = 0; m < h.n_m(); ++m) ph_t.col(m) = belief.covariance.col(h.indices[m]);
  Eigen::MatrixXd hph_t(h.n_m(), h.n_m());
  for (int m = 0; m < h.n_m(); ++m) hph_t.row(m) = ph_t.row(h.indices[m]);

  const Eigen::VectorXd innovation = obs.d - h.apply(belief.mean);
  const Eigen::MatrixXd gain =
      solve_innovation(hph_t, obs.r_diag, ph_t.transpose()).transpose();

  KalmanBelief out;
  out.mean = belief.mean + gain * innovation;
  out.covariance = belief.covariance - gain * ph_t.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

Eigen::MatrixXd compute_p_yppy(const Eigen::MatrixXd& covariance, const ObservationOperator& h,
                               const StateLayout& layout) {
  if (covariance.rows() != layout.n_s() || covariance.cols() != layout.n_s())
    throw std::invalid_argument("compute_p_yppy: covariance shape mismatch");
  Eigen::MatrixXd out(h.n_m(), h.n_m());
  auto restricted = [&](int idx) {
    return !layout.is_param_index(idx) || layout.is_pilot_index(idx);
  };
  for (int m = 0; m < h.n_m(); ++m)
    for (int m2 = 0; m2 < h.n_m(); ++m2)
      out(m, m2) = (restricted(h.indices[m]) && restricted(h.indices[m2]))
                       ? covariance(h.indices[m], h.indices[m2])
                       : 0.0;
  return out;
}

KalmanBelief ppkf_update(const KalmanBelief& belief, const ObservationBatch& obs,
                         const StateLayout& layout, const Eigen::MatrixXd& prior_rp) {
  const auto& h = obs.h;
  if (belief.mean.size() != layout.n_s())
    throw std::invalid_argument("ppkf_update: belief size mismatch");
  if (!h.touches_only_pilot_dynamic(layout))
    throw std::invalid_argument(
        "ppkf_update: measurement operator touches non-pilot parameters");

  const int n_p = layout.n_p();
  const int n_r = layout.n_r();
  const int n_d = layout.n_d();

  // Restricted indices into the stacked (pilot, dynamic) vector.
  std::vector<int> rest(h.indices.size());
  for (std::size_t m = 0; m < h.indices.size(); ++m) {
    const int idx = h.indices[m];
    rest[m] = layout.is_pilot_index(idx) ? idx : idx - n_r;
  }

  Eigen::MatrixXd p_block(n_p + n_d, n_p + n_d);
  p_block.topLeftCorner(n_p, n_p) = belief.covariance.topLeftCorner(n_p, n_p);
  p_block.topRightCorner(n_p, n_d) = belief.covariance.topRightCorner(n_p, n_d);
  p_block.bottomLeftCorner(n_d, n_p) = belief.covariance.bottomLeftCorner(n_d, n_p);
  p_block.bottomRightCorner(n_d, n_d) = belief.covariance.bottomRightCorner(n_d, n_d);

  Eigen::MatrixXd ph_t(n_p + n_d, h.n_m());
  for (int m = 0; m < h.n_m(); ++m) ph_t.col(m) = p_block.col(rest[m]);
  Eigen::MatrixXd p_yppy(h.n_m(), h.n_m());
  for (int m = 0; m < h.n_m(); ++m) p_yppy.row(m) = ph_t.row(rest[m]);

  const Eigen::VectorXd innovation = obs.d - h.apply(belief.mean);
  const Eigen::MatrixXd gain =
      solve_innovation(p_yppy, obs.r_diag, ph_t.transpose()).transpose();

  const Eigen::VectorXd delta_pd = gain * innovation;
  Eigen::MatrixXd delta_p_block = -gain * ph_t.transpose();
  delta_p_block = 0.5 * (delta_p_block + delta_p_block.transpose()).eval();

  const InterpolationOperator op = build_interpolation_operator(
      prior_rp, belief.covariance.topLeftCorner(n_p, n_p), layout);

  KalmanBelief out;
  out.mean = belief.mean + op.apply(delta_pd);
  const Eigen::MatrixXd p_p = op.assemble();
  out.covariance = belief.covariance + p_p * delta_p_block * p_p.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

}  // namespace ppenkf
