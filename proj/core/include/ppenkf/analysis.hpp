#pragma once

#include <functional>
#include <string>

#include "ppenkf/ensemble.hpp"
#include "ppenkf/kriging.hpp"
#include "ppenkf/observation.hpp"
#include "ppenkf/prior_covariance.hpp"

namespace ppenkf {

enum class FilterVariant {
  Enkf,
  Damped,
  Local,
  Hybrid,
  Iterative,
  Dual,
  NormalScore,
  PpEnkf,
  Interpolated,
};

std::string to_string(FilterVariant v);
FilterVariant filter_variant_from_string(const std::string& name);

/// Per-variant analysis parameters; variant-specific fields matter only for
/// their variant.
struct FilterConfig {
  FilterVariant variant = FilterVariant::Enkf;
  double damping = 0.1;
  double localization_length_m = 150.0;
  double hybrid_alpha = 0.5;
  double hybrid_background_variance = 0.25;
  bool ns_transform_dynamic = false;
};

/// Stochastic EnKF analysis with perturbed observations: every member gets
/// the shared gain built from ensemble cross-covariances; only blocks paired
/// with observed variables are formed, never the full state covariance.
Ensemble enkf_analysis(const Ensemble& ens, const ObservationBatch& obs);

/// EnKF analysis with the parameter-block update scaled by `damping`; the
/// dynamic-block update stays unscaled.
Ensemble damped_analysis(const Ensemble& ens, const ObservationBatch& obs, double damping = 0.1);

/// EnKF analysis with the state-to-observation cross covariances tapered by
/// the Gaspari-Cohn weight of the cell distance (compact support at twice the
/// length scale). The observation-space covariance stays untapered.
Ensemble local_analysis(const Ensemble& ens, const ObservationBatch& obs,
                        double length_scale_m = 150.0);

/// EnKF analysis with the gain built from the convex combination
/// alpha * ensemble covariances + (1 - alpha) * fixed diagonal background
/// (parameter variance only, zero dynamic entries).
Ensemble hybrid_analysis(const Ensemble& ens, const ObservationBatch& obs, double alpha = 0.5,
                         double background_param_variance = 0.25);

/// EnKF analysis in normal-score space: parameter entries are transformed
/// per-entry to standard-normal scores, updated jointly with the (optionally
/// untransformed) dynamic variables, and back-transformed.
Ensemble normal_score_analysis(const Ensemble& ens, const ObservationBatch& obs,
                               bool transform_dynamic = false);

/// Pilot point EnKF analysis: per-member update restricted to pilot
/// parameters and dynamic variables with ensemble blocks, then kriging
/// interpolation of the pilot update to non-pilot parameters through the
/// fixed prior cross covariance. Observation cells must be pilot cells.
Ensemble ppenkf_analysis(const Ensemble& ens, const ObservationBatch& obs,
                         const Eigen::MatrixXd& prior_rp);

/// Fixed prior kriging weights plus the prior mean; the interpolated variant
/// reconstructs every non-pilot parameter from pilot values through this.
struct PriorKrigingModel {
  InterpolationOperator op;
  double mean = 0.0;
};

PriorKrigingModel make_prior_kriging(const PriorCrossCovariance& prior, double mean,
                                     const StateLayout& layout);

/// Replaces non-pilot parameters by their prior kriging reconstruction from
/// pilot values: x_r = mean + W0 (x_p - mean).
Ensemble reconstruct_nonpilot(const Ensemble& ens, const PriorKrigingModel& kriging);

/// Interpolated EnKF analysis: restricted update of pilot parameters and
/// dynamics, after which the full parameter field is reconstructed by prior
/// kriging, so the forward computation also sees interpolated fields.
Ensemble interpolated_analysis(const Ensemble& ens, const ObservationBatch& obs,
                               const PriorKrigingModel& kriging);

using PropagateFn = std::function<Ensemble(const Ensemble&, double t0_days, double t1_days)>;

/// Two-pass scheme: parameters are updated first (gain rows restricted to the
/// parameter block), members are re-propagated over the current window with
/// the updated parameters, then dynamic variables are updated with the same
/// observation batch.
struct DualContext {
  const Ensemble& window_start;  // analysis ensemble at the previous observation time
  double window_t0_days = 0.0;
  double time_days = 0.0;
  PropagateFn propagate;
};

Ensemble dual_analysis(const Ensemble& forecast, const ObservationBatch& obs,
                       const DualContext& ctx);

/// Restart scheme: after the EnKF update the parameters are kept, dynamic
/// variables are re-initialized, and the ensemble is re-propagated from t=0
/// to the current time.
struct IterativeContext {
  std::function<Ensemble(const Ensemble& analysis)> restart_to_current_time;
};

Ensemble iterative_analysis(const Ensemble& forecast, const ObservationBatch& obs,
                            const IterativeContext& ctx);

}  // namespace ppenkf
