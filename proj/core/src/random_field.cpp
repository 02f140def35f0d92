#include "ppenkf/random_field.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>
#include <string>

namespace ppenkf {

GaussianFieldGenerator::GaussianFieldGenerator(const Grid& grid, const Variogram& vg)
    : grid_(grid), vg_(vg) {
  if (vg_.std == 0.0) return;  // constant field, no factorization needed
  const int n = grid_.n_cells();
  Eigen::MatrixXd cov(n, n);
  for (int c1 = 0; c1 < n; ++c1) {
    cov(c1, c1) = vg_.sill;
    for (int c2 = 0; c2 < c1; ++c2) {
      const double v = spherical_covariance(grid_.distance(c1, c2), vg_);
      cov(c1, c2) = v;
      cov(c2, c1) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "GaussianFieldGenerator: covariance factorization failed for spherical model with "
        "range " +
        std::to_string(vg_.range) + " m, sill " + std::to_string(vg_.sill) + " on " +
        std::to_string(grid_.nx) + "x" + std::to_string(grid_.ny) + " grid");
  chol_lower_ = llt.matrixL();
}

Eigen::VectorXd GaussianFieldGenerator::generate(Rng& rng) const {
  const int n = grid_.n_cells();
  if (vg_.std == 0.0) return Eigen::VectorXd::Constant(n, vg_.mean);
  Eigen::VectorXd z = rng.normal_vector(n);
  return Eigen::VectorXd::Constant(n, vg_.mean) + chol_lower_ * z;
}

Eigen::VectorXd generate_gaussian_field(const Grid& grid, const Variogram& vg,
                                        const RngSpec& spec) {
  GaussianFieldGenerator gen(grid, vg);
  Rng rng(spec);
  return gen.generate(rng);
}

}  // namespace ppenkf
