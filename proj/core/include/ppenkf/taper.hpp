#pragma once

#include <stdexcept>

namespace ppenkf {

/// Gaspari-Cohn fifth-order compactly supported correlation. `length_scale`
/// is half the cutoff radius: weight 1 at h = 0, 0 for h >= 2c, monotone
/// nonincreasing in between.
inline double taper_weight(double h, double length_scale) {
  if (h < 0.0) throw std::invalid_argument("taper_weight: negative distance");
  if (!(length_scale > 0.0)) throw std::invalid_argument("taper_weight: length scale must be > 0");
  const double r = h / length_scale;
  if (r >= 2.0) return 0.0;
  const double r2 = r * r;
  const double r3 = r2 * r;
  const double r4 = r3 * r;
  const double r5 = r4 * r;
  if (r <= 1.0) {
    return 1.0 - (5.0 / 3.0) * r2 + (5.0 / 8.0) * r3 + 0.5 * r4 - 0.25 * r5;
  }
  return 4.0 - 5.0 * r + (5.0 / 3.0) * r2 + (5.0 / 8.0) * r3 - 0.5 * r4 + (1.0 / 12.0) * r5 -
         (2.0 / 3.0) / r;
}

}  // namespace ppenkf
