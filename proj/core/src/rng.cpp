#include "ppenkf/rng.hpp"

#include <cmath>
#include <numbers>

namespace ppenkf {

namespace {

// splitmix64 finalizer; standard 64-bit mixing constants.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngSpec::derive_seed() const {
  std::uint64_t s = mix(master_seed);
  s = mix(s ^ experiment);
  s = mix(s ^ static_cast<std::uint64_t>(stream));
  s = mix(s ^ member);
  s = mix(s ^ slot);
  return s;
}

double Rng::uniform() {
  // 53-bit mantissa resolution, shifted into the open interval (0,1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

}  // namespace ppenkf
