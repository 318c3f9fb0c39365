#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical code.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// O(N^2) current with every phase evaluated in long double.
inline long double current(const Eigen::VectorXd& c, double t) {
  long double sum = 0;
  const auto n = c.size();
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k) {
      const long double d = static_cast<long double>(m * m - k * k);
      sum += static_cast<long double>(c[m]) * c[k] * (m + k) * std::cos(d * t);
    }
  return sum / (2 * kPiL);
}

inline long double sinc(long double z) { return z == 0 ? 1.0L : std::sin(z) / z; }

// (alpha/pi) sum_{m,n} c_m c_n (m+n) sinc(alpha (m^2 - n^2)) in long double.
inline long double transfer(const Eigen::VectorXd& c, double alpha) {
  long double sum = 0;
  const auto n = c.size();
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k)
      sum += static_cast<long double>(c[m]) * c[k] * (m + k) * sinc(static_cast<long double>(alpha) * (m * m - k * k));
  return sum * alpha / kPiL;
}

// Kernel matrix K_mn = (alpha/pi)(m+n) sinc(alpha(m^2-n^2)) built entry by entry.
inline Eigen::MatrixXd kernel(int n_max, double alpha) {
  Eigen::MatrixXd k(n_max + 1, n_max + 1);
  for (int m = 0; m <= n_max; ++m)
    for (int n = 0; n <= n_max; ++n)
      k(m, n) = static_cast<double>(alpha / kPiL * (m + n) *
                                    sinc(static_cast<long double>(alpha) * (1LL * m * m - 1LL * n * n)));
  return k;
}

// Gaussian coefficients, normalized here rather than by the library.
inline Eigen::VectorXd random_unit(int n_max, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n_max + 1);
  for (auto& x : v) x = g(rng);
  v /= v.norm();
  if (v[0] < 0) v = -v;
  return v;
}

// Weierstrass function W(t) = sum_j 2^{-jH} cos(2^j t), j = 0..terms-1, on [0, 2pi].
inline std::vector<double> weierstrass(double hurst, std::size_t samples, int terms = 31) {
  std::vector<double> w(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const long double t = 2 * kPiL * static_cast<long double>(i) / static_cast<long double>(samples - 1);
    long double sum = 0;
    for (int j = 0; j < terms; ++j) sum += std::pow(2.0L, -j * hurst) * std::cos(std::ldexp(t, j));
    w[i] = static_cast<double>(sum);
  }
  return w;
}

inline std::vector<double> white_noise(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(samples);
  for (auto& x : out) x = u(rng);
  return out;
}

// Higuchi curve length written directly from the textbook definition, 1-indexed.
inline double higuchi_length(const std::vector<double>& x, long k) {
  const long s_count = static_cast<long>(x.size());
  double total = 0;
  for (long s = 1; s <= k; ++s) {
    const long steps = (s_count - s) / k;
    double sum = 0;
    for (long r = 1; r <= steps; ++r) sum += std::abs(x[s + r * k - 1] - x[s + (r - 1) * k - 1]);
    total += sum * (s_count - 1) / (static_cast<double>(steps) * k * k);
  }
  return total / k;
}

// Least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
