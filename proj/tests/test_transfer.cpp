#include <doctest.h>

#include <cmath>
#include <random>

#include "ringflow/errors.hpp"
#include "ringflow/optimizer.hpp"
#include "ringflow/phase.hpp"
#include "ringflow/spectral.hpp"
#include "ringflow/transfer.hpp"
#include "support/oracles.hpp"

using namespace ringflow;

TEST_CASE("double sum examples") {
  for (int m = 0; m <= 5; ++m)
    CHECK(transfer_double_sum(basis_state(5, m, 0.9)) == doctest::Approx(2 * 0.9 * m / kPi).epsilon(1e-15));
  CHECK(transfer_double_sum(basis_state(5, 0, 0.9)) == 0.0);
}

TEST_CASE("double sum matches the long double oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> adist(0.1, 3.0);
  for (int n : {1, 2, 13, 80, 300}) {
    const auto state = normalize(oracle::random_unit(n, rng), adist(rng));
    const double expected = static_cast<double>(oracle::transfer(state.coeffs(), state.alpha()));
    CHECK(std::abs(transfer_double_sum(state) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("quadrature examples") {
  const auto one = basis_state(3, 1, 1.3);
  for (std::int64_t panels : {64, 100, 1024}) {
    const auto q = transfer_by_quadrature(one, panels);
    CHECK(std::abs(q.value - 2 * 1.3 / kPi) <= 1e-12);
  }

  std::mt19937_64 rng(43);
  const auto random50 = normalize(oracle::random_unit(50, rng), 1.1);
  const double exact = transfer_double_sum(random50);
  const double e14 = std::abs(transfer_by_quadrature(random50, 1 << 14).value - exact);
  const double e15 = std::abs(transfer_by_quadrature(random50, 1 << 15).value - exact);
  CHECK(e15 <= 1e-8);
  // Fourth-order convergence: halving the step cuts the error by about 16.
  CHECK(e14 / e15 > 10);

  // (|0> + |1>)/sqrt2 at alpha = pi: j = (1 + cos t)/2pi integrates to exactly 1.
  const auto mix = normalize(std::vector<double>{1, 1}, kPi);
  CHECK(std::abs(transfer_double_sum(mix) - 1.0) <= 1e-10);
  CHECK(std::abs(transfer_by_quadrature(mix, 4096).value - transfer_double_sum(mix)) <= 1e-10);
}

TEST_CASE("odd panel counts are rounded up and flagged") {
  const auto q = transfer_by_quadrature(basis_state(2, 1), 101);
  CHECK(q.panels == 102);
  CHECK(q.panels_rounded);
  const auto even = transfer_by_quadrature(basis_state(2, 1), 100);
  CHECK(even.panels == 100);
  CHECK_FALSE(even.panels_rounded);
  const auto d = transfer_decomposed(basis_state(2, 1), 65);
  CHECK(d.panels == 66);
  CHECK(d.panels_rounded);
  CHECK_THROWS_AS(transfer_by_quadrature(basis_state(2, 1), 63), Error);
}

TEST_CASE("decomposition of the ground state") {
  for (int n : {1, 7, 40}) {
    const double alpha = 0.8;
    const auto d = transfer_decomposed(basis_state(n, 0, alpha), 64);
    const double a_plus = closed_form_spectrum(n).a_plus;
    CHECK(d.plus_part == doctest::Approx(a_plus * alpha / (2 * kPi)).epsilon(1e-13));
    CHECK(d.minus_part == doctest::Approx(-a_plus * alpha / (2 * kPi)).epsilon(1e-13));
    CHECK(std::abs(d.total) <= 1e-14);
    CHECK(d.alpha == alpha);
  }
}

TEST_CASE("three-way agreement and sign contracts on random states") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> ndist(1, 200);
  std::uniform_real_distribution<double> adist(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto state = normalize(oracle::random_unit(ndist(rng), rng), adist(rng));
    const auto panels = suggested_panels(state);
    const double sum = transfer_double_sum(state);
    const double quad = transfer_by_quadrature(state, panels).value;
    const auto d = transfer_decomposed(state, panels);
    CHECK(std::abs(quad - sum) <= 1e-6);
    CHECK(std::abs(d.total - sum) <= 1e-6);
    CHECK(std::abs(d.plus_part + d.minus_part - d.total) <= 1e-10 * std::max(1.0, d.plus_part));
    CHECK(d.plus_part >= -1e-12);
    CHECK(d.minus_part <= 1e-12);
  }
}

TEST_CASE("transfer is a quadratic form") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + 10 * trial;
    const double alpha = 0.4 + 0.1 * trial;
    const Eigen::VectorXd x = oracle::random_unit(n, rng);
    const Eigen::VectorXd y = oracle::random_unit(n, rng);
    const Eigen::MatrixXd k = build_kernel(n, alpha).entries;
    auto p = [&](const Eigen::VectorXd& v) {
      const double s = v.norm();
      return s * s * transfer_double_sum(normalize(v, alpha));
    };
    // Polarization: x^T K y recovered from the quadratic form alone.
    const double bilinear = 0.25 * (p(x + y) - p(x - y));
    CHECK(std::abs(bilinear - x.dot(k * y)) <= 1e-10 * std::max(1.0, k.norm()));
    CHECK(transfer_double_sum(CoefficientVector::from_normalized(-x, alpha)) ==
          doctest::Approx(transfer_double_sum(CoefficientVector::from_normalized(x, alpha))).epsilon(1e-14));
  }
}

TEST_CASE("quadrature reaches 1e-6 for minimizer states up to N = 2000") {
  const auto bm500 = minimize_transfer(500, kOptimalAlpha);
  CHECK(std::abs(transfer_by_quadrature(bm500.state, 1 << 18).value - transfer_double_sum(bm500.state)) <= 1e-6);
  const auto bm2000 = minimize_transfer(2000, kOptimalAlpha);
  CHECK(std::abs(transfer_by_quadrature(bm2000.state, 1 << 20).value - transfer_double_sum(bm2000.state)) <= 1e-6);

  const auto d = transfer_decomposed(bm2000.state, 1 << 20);
  CHECK(std::abs(d.total - (-0.116816)) <= 5e-4);
  CHECK(d.plus_part >= 0);
  CHECK(d.minus_part <= 0);
}

TEST_CASE("closed-form decomposition matches quadrature") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> ndist(1, 150);
  std::uniform_real_distribution<double> adist(0.1, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto state = normalize(oracle::random_unit(ndist(rng), rng), adist(rng));
    const auto exact = transfer_decomposed_exact(state);
    const auto quad = transfer_decomposed(state, suggested_panels(state));
    const double scale = std::max(1.0, exact.plus_part);
    CHECK(std::abs(exact.plus_part - quad.plus_part) <= 1e-7 * scale);
    CHECK(std::abs(exact.minus_part - quad.minus_part) <= 1e-7 * scale);
    CHECK(std::abs(exact.total - transfer_double_sum(state)) <= 1e-10 * scale);
    CHECK(exact.plus_part >= 0);
    CHECK(exact.minus_part <= 0);
    CHECK(exact.panels == 0);
  }
  const auto ground = transfer_decomposed_exact(basis_state(9, 0, 0.8));
  CHECK(ground.plus_part == doctest::Approx(closed_form_spectrum(9).a_plus * 0.8 / (2 * kPi)).epsilon(1e-14));
}
