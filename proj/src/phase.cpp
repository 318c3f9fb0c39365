#include "ringflow/phase.hpp"

namespace ringflow {

namespace {
// 2*pi = kTwoPiHi + kTwoPiLo to ~107 bits.
constexpr double kTwoPiHi = 0x1.921fb54442d18p+2;
constexpr double kTwoPiLo = 0x1.1a62633145c07p-52;
constexpr double kInvTwoPi = 0x1.45f306dc9c883p-3;

// kTwoPiHi = kC1 + kC2 + kC3 exactly; kC1 and kC2 carry at most 24 bits so
// k * kC1 and k * kC2 are exact for |k| < 2^29.
constexpr double kC1 = 0x1.921fb4p+2;
constexpr double kC2 = static_cast<double>(static_cast<float>(kTwoPiHi - kC1));
constexpr double kC3 = kTwoPiHi - kC1 - kC2;
constexpr double kExactQuotientLimit = 0x1p29;

// 2*pi as a sum of terms with at most 26 significant bits each (~159 bits).
constexpr double kTwoPiPieces[] = {0x1.921fb5p+2,  0x1.110b46p-24, 0x1.1a6263p-52,
                                   0x1.8a2e03p-79, 0x1.c1cd128p-105, 0x1.024e088p-133};
}  // namespace

double reduce_phase(std::int64_t multiplier, double t) noexcept {
  const double q = static_cast<double>(multiplier);
  const double p = q * t;
  const double e = std::fma(q, t, -p);
  const double k = std::nearbyint(p * kInvTwoPi);
  if (k == 0.0) return p + e;
  if (std::abs(k) < kExactQuotientLimit) {
    double r = std::fma(-k, kC1, p);
    r = std::fma(-k, kC2, r);
    r = std::fma(-k, kC3, r);
    r = std::fma(-k, kTwoPiLo, r);
    return r + e;
  }
  // Beyond the Cody-Waite range: split k into two halves of at most 27 bits and
  // 2*pi into 26-bit pieces so that every partial product is exact, then sum
  // the terms with compensation.
  const double k_hi = std::ldexp(std::trunc(std::ldexp(k, -26)), 26);
  const double k_lo = k - k_hi;
  double sum = p;
  double carry = 0.0;
  auto add = [&](double x) {
    const double s = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - s) + x : (x - s) + sum;
    sum = s;
  };
  for (double piece : kTwoPiPieces) {
    add(-k_hi * piece);
    add(-k_lo * piece);
  }
  add(e);
  return sum + carry;
}

double sinc_of_product(std::int64_t d, double alpha) noexcept {
  if (d == 0) return 1.0;
  const double z = static_cast<double>(d) * alpha;
  if (std::abs(z) < 1e-8) return 1.0 - z * z / 6.0;
  return std::sin(reduce_phase(d, alpha)) / z;
}

}  // namespace ringflow
