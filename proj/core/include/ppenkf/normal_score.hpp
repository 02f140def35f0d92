#pragma once

#include <Eigen/Core>
#include <vector>

namespace ppenkf {

/// Inverse standard normal CDF, accurate to near machine precision.
double inverse_normal_cdf(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Per-entry normal-score transform (Gaussian anamorphosis). The empirical
/// CDF uses the plotting position rank/(n+1); between anchors both
/// directions interpolate linearly, outside them the edge slope is
/// extrapolated with the score argument clamped to +-4. Untouched scores
/// back-transform to the original values exactly.
class NormalScoreTransform {
 public:
  static constexpr double kScoreClamp = 4.0;

  /// Fits the transform to the ensemble values of one scalar entry. Requires
  /// at least two distinct values; equal values share the mean of their
  /// scores.
  static NormalScoreTransform fit(const Eigen::VectorXd& values);

  double forward(double value) const;
  double back(double score) const;

  Eigen::VectorXd forward(const Eigen::VectorXd& values) const;
  Eigen::VectorXd back(const Eigen::VectorXd& scores) const;

  const std::vector<double>& anchor_values() const { return values_; }
  const std::vector<double>& anchor_scores() const { return scores_; }

 private:
  std::vector<double> values_;  // strictly increasing
  std::vector<double> scores_;  // strictly increasing
};

}  // namespace ppenkf
