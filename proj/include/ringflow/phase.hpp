#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace ringflow {

inline constexpr double kPi = 3.14159265358979323846;

// Reduces multiplier * t modulo 2*pi into roughly [-pi, pi]. The product is
// formed exactly (double-double) and 2*pi is split Cody-Waite style, so the
// result is accurate to a few ulps of pi even when multiplier * t ~ 1e8.
// Requires |multiplier| < 2^53.
double reduce_phase(std::int64_t multiplier, double t) noexcept;

// exp(-i * multiplier * t) with the argument reduced as above.
inline std::complex<double> phasor(std::int64_t multiplier, double t) noexcept {
  const double r = reduce_phase(multiplier, t);
  return {std::cos(r), -std::sin(r)};
}

template <typename Scalar>
Scalar sinc(Scalar z) noexcept {
  using std::abs;
  using std::sin;
  if (abs(z) < Scalar(1e-8)) return Scalar(1) - z * z / Scalar(6);
  return sin(z) / z;
}

// sinc(alpha * d) for an integer d, with sin evaluated on the reduced phase.
double sinc_of_product(std::int64_t d, double alpha) noexcept;

}  // namespace ringflow
