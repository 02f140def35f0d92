#include "ppenkf/normal_score.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ppenkf {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");

  // Acklam's rational approximation, then one Halley refinement step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

NormalScoreTransform NormalScoreTransform::fit(const Eigen::VectorXd& values) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw std::invalid_argument("NormalScoreTransform: need at least 2 values");
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw std::invalid_argument("NormalScoreTransform: all values identical (degenerate CDF)");

  NormalScoreTransform t;
  t.values_.reserve(n);
  t.scores_.reserve(n);
  int k = 0;
  while (k < n) {
    int j = k;
    while (j + 1 < n && sorted[j + 1] == sorted[k]) ++j;
    // Weibull plotting position rank/(n+1); tied values collapse to one
    // anchor at the mean of their scores.
    double score_sum = 0.0;
    for (int r = k; r <= j; ++r) score_sum += inverse_normal_cdf((r + 1.0) / (n + 1.0));
    t.values_.push_back(sorted[k]);
    t.scores_.push_back(score_sum / (j - k + 1));
    k = j + 1;
  }
  return t;
}

namespace {

// Piecewise-linear map through (xs, ys) with edge-slope extrapolation.
double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  if (x <= xs.front()) {
    const double slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    return ys.front() + slope * (x - xs.front());
  }
  if (x >= xs.back()) {
    const double slope = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
    return ys.back() + slope * (x - xs.back());
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

}  // namespace

double NormalScoreTransform::forward(double value) const {
  return interp(values_, scores_, value);
}

double NormalScoreTransform::back(double score) const {
  const double s = std::clamp(score, -kScoreClamp, kScoreClamp);
  return interp(scores_, values_, s);
}

Eigen::VectorXd NormalScoreTransform::forward(const Eigen::VectorXd& values) const {
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out[i] = forward(values[i]);
  return out;
}

Eigen::VectorXd NormalScoreTransform::back(const Eigen::VectorXd& scores) const {
  Eigen::VectorXd out(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) out[i] = back(scores[i]);
  return out;
}

}  // namespace ppenkf
