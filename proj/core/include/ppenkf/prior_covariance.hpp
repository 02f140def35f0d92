#pragma once

#include <Eigen/Core>

#include "ppenkf/rng.hpp"
#include "ppenkf/state.hpp"
#include "ppenkf/variogram.hpp"

namespace ppenkf {

enum class CovarianceSource { Analytic, Empirical };

/// Fixed prior covariance between non-pilot and pilot parameters (the kriging
/// input held constant throughout assimilation), plus the matching
/// pilot-pilot prior block needed wherever prior kriging weights are formed.
struct PriorCrossCovariance {
  Eigen::MatrixXd rp;  // n_r x n_p
  Eigen::MatrixXd pp;  // n_p x n_p
  CovarianceSource source = CovarianceSource::Analytic;
  int n_fields = 0;  // realizations used by the empirical source
};

/// Analytic source fills entries with the spherical covariance of the
/// cell-center distance; the empirical source uses the sample covariance over
/// `n_fields` realizations drawn from the given stream.
PriorCrossCovariance build_prior_cross_covariance(const StateLayout& layout, const Variogram& vg,
                                                  CovarianceSource source, int n_fields = 10000,
                                                  const RngSpec& field_stream = RngSpec{});

}  // namespace ppenkf
