#include "ppenkf/analysis.hpp"

#include <stdexcept>

#include "ppenkf/kalman.hpp"
#include "ppenkf/normal_score.hpp"
#include "ppenkf/taper.hpp"

namespace ppenkf {

std::string to_string(FilterVariant v) {
  switch (v) {
    case FilterVariant::Enkf: return "enkf";
    case FilterVariant::Damped: return "damped";
    case FilterVariant::Local: return "local";
    case FilterVariant::Hybrid: return "hybrid";
    case FilterVariant::Iterative: return "iterative";
    case FilterVariant::Dual: return "dual";
    case FilterVariant::NormalScore: return "normal_score";
    case FilterVariant::PpEnkf: return "pp_enkf";
    case FilterVariant::Interpolated: return "interpolated";
  }
  return "unknown";
}

FilterVariant filter_variant_from_string(const std::string& name) {
  for (FilterVariant v :
       {FilterVariant::Enkf, FilterVariant::Damped, FilterVariant::Local, FilterVariant::Hybrid,
        FilterVariant::Iterative, FilterVariant::Dual, FilterVariant::NormalScore,
        FilterVariant::PpEnkf, FilterVariant::Interpolated})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown filter variant '" + name + "'");
}

namespace {

struct ObsStats {
  Eigen::MatrixXd innovations;    // n_m x n_e, d_i - H x_i
  Eigen::MatrixXd obs_anomalies;  // n_m x n_e
  Eigen::MatrixXd obs_cov;        // n_m x n_m
};

ObsStats obs_stats(const Ensemble& ens, const ObservationBatch& obs) {
  if (obs.h.n_state != ens.layout.n_s())
    throw std::invalid_argument("analysis: operator state size mismatch");
  if (obs.d_perturbed.cols() != ens.size())
    throw std::invalid_argument("analysis: perturbed observations sized for another ensemble");
  ObsStats s;
  const Eigen::MatrixXd simulated = obs.h.apply_ensemble(ens.members);
  s.innovations = obs.d_perturbed - simulated;
  s.obs_anomalies = simulated.colwise() - simulated.rowwise().mean().eval();
  s.obs_cov = s.obs_anomalies * s.obs_anomalies.transpose() / double(ens.size() - 1);
  return s;
}

// Cross covariance between selected state rows and the observed variables.
Eigen::MatrixXd cross_covariance(const Eigen::MatrixXd& state_anomalies,
                                 const Eigen::MatrixXd& obs_anomalies) {
  return state_anomalies * obs_anomalies.transpose() / double(state_anomalies.cols() - 1);
}

}  // namespace

Ensemble enkf_analysis(const Ensemble& ens, const ObservationBatch& obs) {
  const ObsStats s = obs_stats(ens, obs);
  const Eigen::MatrixXd weights = solve_innovation(s.obs_cov, obs.r_diag, s.innovations);
  Eigen::MatrixXd cross = cross_covariance(ens.anomalies(), s.obs_anomalies);
  return Ensemble(ens.layout, ens.members + cross * weights);
}

Ensemble damped_analysis(const Ensemble& ens, const ObservationBatch& obs, double damping) {
  if (damping < 0.0) throw std::invalid_argument("damped_analysis: damping must be >= 0");
  const ObsStats s = obs_stats(ens, obs);
  const Eigen::MatrixXd weights = solve_innovation(s.obs_cov, obs.r_diag, s.innovations);
  Eigen::MatrixXd delta = cross_covariance(ens.anomalies(), s.obs_anomalies) * weights;
  delta.topRows(ens.layout.n_p() + ens.layout.n_r()) *= damping;
  return Ensemble(ens.layout, ens.members + delta);
}

Ensemble local_analysis(const Ensemble& ens, const ObservationBatch& obs, double length_scale_m) {
  const ObsStats s = obs_stats(ens, obs);
  const Eigen::MatrixXd weights = solve_innovation(s.obs_cov, obs.r_diag, s.innovations);
  Eigen::MatrixXd cross = cross_covariance(ens.anomalies(), s.obs_anomalies);
  const StateLayout& layout = ens.layout;
  const Grid& grid = layout.grid();
  for (int m = 0; m < obs.h.n_m(); ++m) {
    const int obs_cell = layout.cell_of_state_index(obs.h.indices[m]);
    for (int k = 0; k < layout.n_s(); ++k)
      cross(k, m) *= taper_weight(grid.distance(layout.cell_of_state_index(k), obs_cell),
                                  length_scale_m);
  }
  return Ensemble(layout, ens.members + cross * weights);
}

Ensemble hybrid_analysis(const Ensemble& ens, const ObservationBatch& obs, double alpha,
                         double background_param_variance) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("hybrid_analysis: alpha must be in [0,1]");
  const ObsStats s = obs_stats(ens, obs);
  const StateLayout& layout = ens.layout;

  // Background is diagonal: parameter entries carry the prior variance,
  // dynamic and cross entries are zero. Only B H^T and H B H^T are needed.
  Eigen::MatrixXd obs_cov = alpha * s.obs_cov;
  Eigen::MatrixXd cross = alpha * cross_covariance(ens.anomalies(), s.obs_anomalies);
  for (int m = 0; m < obs.h.n_m(); ++m) {
    const int idx = obs.h.indices[m];
    if (layout.is_param_index(idx)) {
      obs_cov(m, m) += (1.0 - alpha) * background_param_variance;
      cross(idx, m) += (1.0 - alpha) * background_param_variance;
    }
  }
  const Eigen::MatrixXd weights = solve_innovation(obs_cov, obs.r_diag, s.innovations);
  return Ensemble(layout, ens.members + cross * weights);
}

Ensemble normal_score_analysis(const Ensemble& ens, const ObservationBatch& obs,
                               bool transform_dynamic) {
  const StateLayout& layout = ens.layout;
  const int n_transformed = transform_dynamic ? layout.n_s() : layout.n_p() + layout.n_r();

  std::vector<NormalScoreTransform> transforms;
  transforms.reserve(n_transformed);
  Ensemble scored(layout, ens.members);
  for (int k = 0; k < n_transformed; ++k) {
    transforms.push_back(NormalScoreTransform::fit(ens.members.row(k).transpose()));
    scored.members.row(k) = transforms.back().forward(ens.members.row(k).transpose()).transpose();
  }
  Ensemble updated = enkf_analysis(scored, obs);
  for (int k = 0; k < n_transformed; ++k)
    updated.members.row(k) = transforms[k].back(updated.members.row(k).transpose()).transpose();
  return updated;
}

namespace {

struct RestrictedUpdate {
  Eigen::MatrixXd delta_pilot;    // n_p x n_e
  Eigen::MatrixXd delta_dynamic;  // n_d x n_e
  Eigen::MatrixXd pilot_anomalies;
};

// Update of (pilot, dynamic) entries from the restricted gain with the
// ensemble measurement covariance P_yppy. Requires H touching only pilot
// parameters and dynamic variables, which makes P_yppy equal to the plain
// sample covariance of the simulated measurements.
RestrictedUpdate restricted_update(const Ensemble& ens, const ObservationBatch& obs) {
  const StateLayout& layout = ens.layout;
  if (!obs.h.touches_only_pilot_dynamic(layout))
    throw std::invalid_argument(
        "restricted analysis: observation touches non-pilot parameters; all observation cells "
        "must be pilot cells");
  const ObsStats s = obs_stats(ens, obs);
  const Eigen::MatrixXd weights = solve_innovation(s.obs_cov, obs.r_diag, s.innovations);
  const Eigen::MatrixXd anomalies = ens.anomalies();
  RestrictedUpdate u;
  u.pilot_anomalies = anomalies.topRows(layout.n_p());
  u.delta_pilot = cross_covariance(u.pilot_anomalies, s.obs_anomalies) * weights;
  u.delta_dynamic =
      cross_covariance(anomalies.bottomRows(layout.n_d()), s.obs_anomalies) * weights;
  return u;
}

}  // namespace

Ensemble ppenkf_analysis(const Ensemble& ens, const ObservationBatch& obs,
                         const Eigen::MatrixXd& prior_rp) {
  const StateLayout& layout = ens.layout;
  const RestrictedUpdate u = restricted_update(ens, obs);
  const Eigen::MatrixXd pilot_cov =
      u.pilot_anomalies * u.pilot_anomalies.transpose() / double(ens.size() - 1);
  const InterpolationOperator op = build_interpolation_operator(prior_rp, pilot_cov, layout);

  Eigen::MatrixXd members = ens.members;
  members.topRows(layout.n_p()) += u.delta_pilot;
  members.middleRows(layout.n_p(), layout.n_r()) += op.nonpilot_update(u.delta_pilot);
  members.bottomRows(layout.n_d()) += u.delta_dynamic;
  return Ensemble(layout, std::move(members));
}

PriorKrigingModel make_prior_kriging(const PriorCrossCovariance& prior, double mean,
                                     const StateLayout& layout) {
  return PriorKrigingModel{build_interpolation_operator(prior.rp, prior.pp, layout), mean};
}

Ensemble reconstruct_nonpilot(const Ensemble& ens, const PriorKrigingModel& kriging) {
  const StateLayout& layout = ens.layout;
  if (layout.n_r() == 0) return ens;
  Eigen::MatrixXd members = ens.members;
  const Eigen::MatrixXd pilot_dev =
      members.topRows(layout.n_p()).colwise() -
      Eigen::VectorXd::Constant(layout.n_p(), kriging.mean);
  members.middleRows(layout.n_p(), layout.n_r()) =
      (kriging.op.weights() * pilot_dev).colwise() +
      Eigen::VectorXd::Constant(layout.n_r(), kriging.mean);
  return Ensemble(layout, std::move(members));
}

Ensemble interpolated_analysis(const Ensemble& ens, const ObservationBatch& obs,
                               const PriorKrigingModel& kriging) {
  const StateLayout& layout = ens.layout;
  const RestrictedUpdate u = restricted_update(ens, obs);
  Eigen::MatrixXd members = ens.members;
  members.topRows(layout.n_p()) += u.delta_pilot;
  members.bottomRows(layout.n_d()) += u.delta_dynamic;
  return reconstruct_nonpilot(Ensemble(layout, std::move(members)), kriging);
}

Ensemble dual_analysis(const Ensemble& forecast, const ObservationBatch& obs,
                       const DualContext& ctx) {
  const StateLayout& layout = forecast.layout;
  const int n_param = layout.n_p() + layout.n_r();

  // Pass 1: parameter rows of the joint gain.
  const ObsStats s1 = obs_stats(forecast, obs);
  const Eigen::MatrixXd w1 = solve_innovation(s1.obs_cov, obs.r_diag, s1.innovations);
  const Eigen::MatrixXd delta_param =
      cross_covariance(forecast.anomalies().topRows(n_param), s1.obs_anomalies) * w1;

  // Re-propagate the window with updated parameters and the window-start
  // dynamic variables.
  Eigen::MatrixXd members = ctx.window_start.members;
  members.topRows(n_param) = forecast.members.topRows(n_param) + delta_param;
  const Ensemble repropagated =
      ctx.propagate(Ensemble(layout, std::move(members)), ctx.window_t0_days, ctx.time_days);

  // Pass 2: dynamic rows only, same observation batch.
  const ObsStats s2 = obs_stats(repropagated, obs);
  const Eigen::MatrixXd w2 = solve_innovation(s2.obs_cov, obs.r_diag, s2.innovations);
  const Eigen::MatrixXd delta_dyn =
      cross_covariance(repropagated.anomalies().bottomRows(layout.n_d()), s2.obs_anomalies) * w2;

  Eigen::MatrixXd out = repropagated.members;
  out.bottomRows(layout.n_d()) += delta_dyn;
  return Ensemble(layout, std::move(out));
}

Ensemble iterative_analysis(const Ensemble& forecast, const ObservationBatch& obs,
                            const IterativeContext& ctx) {
  return ctx.restart_to_current_time(enkf_analysis(forecast, obs));
}

}  // namespace ppenkf
