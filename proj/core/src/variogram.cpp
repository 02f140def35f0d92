#include "ppenkf/variogram.hpp"

namespace ppenkf {

double spherical_covariance(double h, const Variogram& vg) {
  if (h < 0.0) throw std::invalid_argument("spherical_covariance: negative distance");
  if (!(vg.range > 0.0)) throw std::invalid_argument("spherical_covariance: range must be > 0");
  if (h >= vg.range) return 0.0;
  const double r = h / vg.range;
  return vg.sill * (1.0 - 1.5 * r + 0.5 * r * r * r);
}

double Variogram::covariance(double h) const { return spherical_covariance(h, *this); }

}  // namespace ppenkf
