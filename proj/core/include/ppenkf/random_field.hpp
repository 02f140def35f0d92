#pragma once

#include <Eigen/Core>

#include "ppenkf/grid.hpp"
#include "ppenkf/rng.hpp"
#include "ppenkf/variogram.hpp"

namespace ppenkf {

/// Stationary multi-Gaussian random field sampler over a grid. Uses the exact
/// dense lower-triangular square root of the n_g x n_g spherical covariance,
/// which is distributionally equivalent to sequential Gaussian simulation of
/// the same model without path-ordering artifacts. The factorization is
/// computed once per (grid, variogram) and reused for all realizations.
class GaussianFieldGenerator {
 public:
  GaussianFieldGenerator(const Grid& grid, const Variogram& vg);

  /// One realization: mean + L z with z iid standard normal.
  Eigen::VectorXd generate(Rng& rng) const;

  const Grid& grid() const { return grid_; }
  const Variogram& variogram() const { return vg_; }

 private:
  Grid grid_;
  Variogram vg_;
  Eigen::MatrixXd chol_lower_;  // empty when std == 0
};

/// Convenience wrapper: one realization for a given stream.
Eigen::VectorXd generate_gaussian_field(const Grid& grid, const Variogram& vg,
                                        const RngSpec& spec);

}  // namespace ppenkf
