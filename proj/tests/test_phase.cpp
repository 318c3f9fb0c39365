#include <doctest.h>

#include <quadmath.h>

#include <cmath>
#include <random>

#include "ringflow/phase.hpp"

using namespace ringflow;

namespace {

// Reduction of multiplier * t into [-pi, pi] in 113-bit arithmetic.
double quad_reduce(std::int64_t multiplier, double t) {
  const __float128 x = static_cast<__float128>(multiplier) * static_cast<__float128>(t);
  return static_cast<double>(remainderq(x, 2 * M_PIq));
}

}  // namespace

TEST_CASE("phase reduction matches a quad precision oracle") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> mdist(0, 10000);
  std::uniform_real_distribution<double> tdist(-8.0, 8.0);
  double worst = 0;
  for (int i = 0; i < 200000; ++i) {
    const std::int64_t m = mdist(rng);
    const std::int64_t mult = m * m;
    const double t = tdist(rng);
    const double expected = quad_reduce(mult, t);
    const double got = reduce_phase(mult, t);
    // Results near +-pi may land on either branch.
    double diff = std::abs(got - expected);
    diff = std::min(diff, std::abs(diff - 2 * kPi));
    worst = std::max(worst, diff);
  }
  CHECK(worst <= 2e-15);
}

TEST_CASE("phase reduction for huge multipliers") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> mdist(std::int64_t{1} << 40, std::int64_t{1} << 50);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t mult = mdist(rng);
    const double t = std::ldexp(static_cast<double>(i + 1), -10);
    const double expected = quad_reduce(mult, t);
    double diff = std::abs(reduce_phase(mult, t) - expected);
    diff = std::min(diff, std::abs(diff - 2 * kPi));
    CHECK(diff <= 1e-13);
  }
}

TEST_CASE("phasor and sinc") {
  const auto p = phasor(9, 0.25);
  CHECK(p.real() == doctest::Approx(std::cos(2.25)).epsilon(1e-15));
  CHECK(p.imag() == doctest::Approx(-std::sin(2.25)).epsilon(1e-15));

  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-9) == 1.0 - 1e-18 / 6);
  CHECK(sinc(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-16));
  CHECK(sinc(-2.0) == sinc(2.0));
  CHECK(sinc_of_product(0, 1.3) == 1.0);
  CHECK(sinc_of_product(-7, 1.3) == sinc_of_product(7, 1.3));
  CHECK(sinc_of_product(12345678, 1.163635) ==
        doctest::Approx(std::sin(quad_reduce(12345678, 1.163635)) / (12345678 * 1.163635)).epsilon(1e-13));
}
