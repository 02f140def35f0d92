#include "ppenkf/kriging.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

namespace ppenkf {

Eigen::MatrixXd solve_spd_jittered(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                   double relative_jitter) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve_spd_jittered: matrix not square");
  if (a.rows() != b.rows()) throw std::invalid_argument("solve_spd_jittered: shape mismatch");
  const double n = static_cast<double>(a.rows());
  const double base = a.trace() / n;
  double jitter = relative_jitter * base;
  if (!(jitter > 0.0)) jitter = relative_jitter;  // zero-trace guard
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXd reg = a;
    reg.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(reg);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd x = llt.solve(b);
      if (x.allFinite()) return x;
    }
    jitter *= 10.0;
  }
  throw std::runtime_error("solve_spd_jittered: factorization failed beyond jitter tolerance (n=" +
                           std::to_string(a.rows()) + ")");
}

InterpolationOperator::InterpolationOperator(Eigen::MatrixXd weights, int n_p, int n_r, int n_d)
    : weights_(std::move(weights)), n_p_(n_p), n_r_(n_r), n_d_(n_d) {
  if (weights_.rows() != n_r_ || weights_.cols() != n_p_)
    throw std::invalid_argument("InterpolationOperator: weight shape mismatch");
}

Eigen::VectorXd InterpolationOperator::apply(const Eigen::VectorXd& update_pd) const {
  if (update_pd.size() != n_p_ + n_d_)
    throw std::invalid_argument("InterpolationOperator::apply: expected length n_p + n_d");
  Eigen::VectorXd out(n_p_ + n_r_ + n_d_);
  out.head(n_p_) = update_pd.head(n_p_);
  out.segment(n_p_, n_r_).noalias() = weights_ * update_pd.head(n_p_);
  out.tail(n_d_) = update_pd.tail(n_d_);
  return out;
}

Eigen::MatrixXd InterpolationOperator::apply(const Eigen::MatrixXd& updates_pd) const {
  if (updates_pd.rows() != n_p_ + n_d_)
    throw std::invalid_argument("InterpolationOperator::apply: expected n_p + n_d rows");
  Eigen::MatrixXd out(n_p_ + n_r_ + n_d_, updates_pd.cols());
  out.topRows(n_p_) = updates_pd.topRows(n_p_);
  out.middleRows(n_p_, n_r_).noalias() = weights_ * updates_pd.topRows(n_p_);
  out.bottomRows(n_d_) = updates_pd.bottomRows(n_d_);
  return out;
}

Eigen::MatrixXd InterpolationOperator::assemble() const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_p_ + n_r_ + n_d_, n_p_ + n_d_);
  p.topLeftCorner(n_p_, n_p_).setIdentity();
  p.block(n_p_, 0, n_r_, n_p_) = weights_;
  p.bottomRightCorner(n_d_, n_d_).setIdentity();
  return p;
}

InterpolationOperator build_interpolation_operator(const Eigen::MatrixXd& prior_rp,
                                                   const Eigen::MatrixXd& pilot_cov,
                                                   const StateLayout& layout) {
  if (pilot_cov.rows() != layout.n_p() || pilot_cov.cols() != layout.n_p())
    throw std::invalid_argument("build_interpolation_operator: pilot covariance shape mismatch");
  if (prior_rp.rows() != layout.n_r() || prior_rp.cols() != layout.n_p())
    throw std::invalid_argument("build_interpolation_operator: prior_rp shape mismatch");
  Eigen::MatrixXd weights;
  if (layout.n_r() == 0 || layout.n_p() == 0) {
    weights = Eigen::MatrixXd::Zero(layout.n_r(), layout.n_p());
  } else {
    // W = P_rp0 * P_pp^-1, computed as the transpose of P_pp^-1 * P_rp0^T.
    weights = solve_spd_jittered(pilot_cov, prior_rp.transpose(), kKrigingJitter).transpose();
  }
  return InterpolationOperator(std::move(weights), layout.n_p(), layout.n_r(), layout.n_d());
}

}  // namespace ppenkf
