#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ringflow/errors.hpp"
#include "ringflow/fractal.hpp"
#include "ringflow/guess.hpp"
#include "ringflow/regression.hpp"
#include "support/oracles.hpp"

using namespace ringflow;

namespace {

HiguchiConfig strides(int k_max = 8192) { return HiguchiConfig{default_strides(k_max), std::nullopt}; }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an ringflow::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("default stride schedule") {
  const auto ks = default_strides();
  CHECK(ks.size() == 47);
  CHECK(ks.front() == 1);
  CHECK(ks[1] == 2);
  CHECK(ks[2] == 4);
  CHECK(ks.back() == 8192);
  CHECK(std::is_sorted(ks.begin(), ks.end()));
  CHECK(std::adjacent_find(ks.begin(), ks.end()) == ks.end());
}

TEST_CASE("lengths match the textbook definition") {
  const auto x = oracle::white_noise(5000, 3);
  for (int k : {1, 2, 3, 7, 64, 999, 2500}) {
    const double expected = oracle::higuchi_length(x, k);
    CHECK(higuchi_lengths(x, k) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("k = 1 gives the total variation") {
  const auto x = oracle::white_noise(1000, 4);
  double tv = 0;
  for (std::size_t i = 1; i < x.size(); ++i) tv += std::abs(x[i] - x[i - 1]);
  CHECK(higuchi_lengths(x, 1) == tv);
}

TEST_CASE("degenerate inputs") {
  const std::vector<double> flat(1000, 2.5);
  for (int k : {1, 5, 100}) CHECK(higuchi_lengths(flat, k) == 0.0);
  CHECK(kind_of([&] { higuchi_dimension(flat, strides(256)); }) == ErrorKind::DegenerateSeries);

  const std::vector<double> shorty(10, 1.0);
  CHECK(kind_of([&] { higuchi_lengths(shorty, 9); }) == ErrorKind::StrideTooLarge);
  CHECK(kind_of([&] { higuchi_lengths(shorty, 10); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { higuchi_lengths(shorty, 0); }) == ErrorKind::InvalidArgument);

  const auto noise = oracle::white_noise(1000, 5);
  CHECK(kind_of([&] { higuchi_dimension(noise, HiguchiConfig{{1, 2, 3, 4}, std::nullopt}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { higuchi_dimension(noise, HiguchiConfig{{1, 3, 2, 4, 5}, std::nullopt}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { higuchi_dimension(noise, HiguchiConfig{{1, 2, 3, 4, 1000}, std::nullopt}); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("calibration: ramp") {
  std::vector<double> ramp(1 << 17);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  const auto r = higuchi_dimension(ramp, strides());
  CHECK(std::abs(r.dimension - 1.0) <= 0.02);
  CHECK(r.slope_stderr >= 0);
  CHECK_FALSE(r.flagged);
}

TEST_CASE("calibration: white noise") {
  const auto r = higuchi_dimension(oracle::white_noise(1 << 17, 6), strides());
  CHECK(std::abs(r.dimension - 2.0) <= 0.05);
}

TEST_CASE("calibration: Weierstrass H = 0.5") {
  const auto r = higuchi_dimension(oracle::weierstrass(0.5, 1 << 17), strides());
  CHECK(std::abs(r.dimension - 1.5) <= 0.05);
}

TEST_CASE("fit report against an independent regression") {
  const auto w = oracle::weierstrass(0.7, 1 << 14);
  const auto cfg = strides(4096);
  const auto r = higuchi_dimension(w, cfg);
  std::vector<double> x, y;
  for (int k : cfg.k_values) {
    x.push_back(std::log2(static_cast<double>(k)));
    y.push_back(std::log2(oracle::higuchi_length(w, k)));
  }
  CHECK(r.points.size() == cfg.k_values.size());
  CHECK(r.slope == doctest::Approx(oracle::ols_slope(x, y)).epsilon(1e-10));
  CHECK(r.dimension == -r.slope);
}

TEST_CASE("fit range restricts the regression") {
  const auto w = oracle::weierstrass(0.5, 1 << 14);
  HiguchiConfig cfg = strides(4096);
  cfg.fit_range = std::pair{4, 512};
  const auto r = higuchi_dimension(w, cfg);
  for (const auto& [lk, ll] : r.points) {
    CHECK(lk >= 2.0);
    CHECK(lk <= 9.0);
  }
}

TEST_CASE("affine invariance") {
  const auto w = oracle::weierstrass(0.4, 1 << 15);
  std::vector<double> scaled(w.size()), shifted(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    scaled[i] = -4.0 * w[i];
    shifted[i] = 0.37 * w[i] + 12.0;
  }
  const auto cfg = strides(4096);
  const auto base = higuchi_dimension(w, cfg);
  CHECK(higuchi_dimension(scaled, cfg).dimension == doctest::Approx(base.dimension).epsilon(1e-12));
  CHECK(higuchi_dimension(scaled, cfg).intercept == doctest::Approx(base.intercept + 2).epsilon(1e-12));
  CHECK(higuchi_dimension(shifted, cfg).dimension == doctest::Approx(base.dimension).epsilon(1e-9));
}

TEST_CASE("subsampling consistency") {
  const auto full = oracle::weierstrass(0.3, 1 << 18);
  std::vector<double> half;
  for (std::size_t i = 0; i < full.size(); i += 2) half.push_back(full[i]);
  const auto a = higuchi_dimension(full, strides());
  const auto b = higuchi_dimension(half, strides());
  CHECK(std::abs(a.dimension - b.dimension) <= 0.03);
}

TEST_CASE("product of two fractal signals takes the larger dimension") {
  const auto smooth = oracle::weierstrass(0.75, 1 << 17);
  const auto rough = oracle::weierstrass(0.25, 1 << 17);
  std::vector<double> product(smooth.size());
  for (std::size_t i = 0; i < product.size(); ++i) product[i] = smooth[i] * rough[i];
  const auto r = higuchi_dimension(product, strides());
  CHECK(std::abs(r.dimension - 1.75) <= 0.05);
}

TEST_CASE("regression helper") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto fit = ordinary_least_squares<double>(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_stderr == doctest::Approx(0.0));
  const std::vector<double> same{1, 1, 1};
  CHECK_THROWS_AS(ordinary_least_squares<double>(same, same), Error);
}

TEST_CASE("spectrum slopes of the guess state") {
  const auto g = build_guess(9999);
  const auto h0 = spectrum_slope(g.state, SpectrumWeight::None);
  const auto h1 = spectrum_slope(g.state, SpectrumWeight::M);
  CHECK(std::abs(h0.beta - 2.5) <= 0.15);
  CHECK(std::abs(h0.dimension - 1.25) <= 0.08);
  CHECK(std::abs(h1.beta - 1.5) <= 0.15);
  CHECK(std::abs(h1.dimension - 1.75) <= 0.08);
  CHECK(h0.dimension == (5 - h0.beta) / 2);
  CHECK_FALSE(h0.flagged);
  CHECK_FALSE(h1.flagged);
}

TEST_CASE("spectrum of an exponentially decaying state is rejected") {
  Eigen::VectorXd c(201);
  for (int m = 0; m <= 200; ++m) c[m] = std::ldexp(1.0, -m);
  const auto state = normalize(c);
  bool rejected = false;
  try {
    const auto r = spectrum_slope(state, SpectrumWeight::None);
    rejected = r.flagged && r.beta > 3;
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::InsufficientRange;
  }
  CHECK(rejected);
  CHECK_THROWS_AS(spectrum_slope(build_guess(99).state, SpectrumWeight::None), Error);
}
