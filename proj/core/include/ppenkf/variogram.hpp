#pragma once

#include <stdexcept>

namespace ppenkf {

/// Spherical variogram model with zero nugget. `range` is the distance at
/// which covariance vanishes; by convention it defaults to twice the
/// isotropic correlation length but can be set directly.
struct Variogram {
  double range = 0.0;  // [m]
  double sill = 0.0;   // variance, [log10(m^2)]^2
  double nugget = 0.0;
  double mean = 0.0;  // [log10 m^2]
  double std = 0.0;   // [log10 m^2]

  static constexpr double kDefaultRangeFactor = 2.0;

  /// Builds a spherical model from (mean, std, correlation length).
  static Variogram spherical(double mean, double std, double correlation_length_m,
                             double range_factor = kDefaultRangeFactor) {
    if (!(correlation_length_m > 0.0))
      throw std::invalid_argument("Variogram: correlation length must be > 0");
    if (std < 0.0) throw std::invalid_argument("Variogram: std must be >= 0");
    Variogram vg;
    vg.mean = mean;
    vg.std = std;
    vg.sill = std * std;
    vg.range = range_factor * correlation_length_m;
    return vg;
  }

  double covariance(double h) const;

  bool operator==(const Variogram&) const = default;
};

/// Spherical covariance sill*(1 - 1.5 h/a + 0.5 (h/a)^3) for h < a, else 0.
double spherical_covariance(double h, const Variogram& vg);

}  // namespace ppenkf
