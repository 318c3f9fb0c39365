#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ringflow/dynamics.hpp"
#include "ringflow/state.hpp"

namespace ringflow {

struct HiguchiConfig {
  std::vector<int> k_values;                      // sorted, distinct, >= 1
  std::optional<std::pair<int, int>> fit_range;   // inclusive [k_lo, k_hi] used in the regression

  /// Throws InvalidArgument if the strides are unsorted, repeated, < 1, or
  /// larger than series_length - 1.
  void validate(Eigen::Index series_length) const;
};

/// {1, 2} together with round(2^{j/4}) for j = 8, 9, ... while <= k_max.
/// For k_max = 8192 this gives 47 geometrically spaced strides.
std::vector<int> default_strides(int k_max = 8192);

struct FitReport {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<std::pair<double, double>> points;  // (log2 x, log2 y) used in the fit
  double dimension = 0.0;
  double beta = 0.0;     // spectral exponent; spectrum fits only
  bool flagged = false;  // outside the validity window, see `note`
  std::string note;
};

/// Mean curve length L_k over the k offset sub-sequences of the series.
/// Throws StrideTooLarge when some sub-sequence has no increments.
double higuchi_lengths(std::span<const double> series, int k);
double higuchi_lengths(const TimeSeries& series, int k);

/// OLS fit of log2 L_k against log2 k; dimension = -slope.
/// Throws DegenerateSeries if any L_k is zero.
FitReport higuchi_dimension(std::span<const double> series, const HiguchiConfig& config);
FitReport higuchi_dimension(const TimeSeries& series, const HiguchiConfig& config);

enum class SpectrumWeight { None, M };

/// Treats sum_m w_m c_m e^{-i m^2 t} as a Fourier series with l = m^2 and
/// fits the binned power spectrum |a_l|^2 = (w_m c_m)^2 / (2m) over
/// l in [N^0.5, N^1.8]. beta = -slope, dimension = (5 - beta) / 2.
/// Requires N >= 100; throws InsufficientRange with fewer than 8 bins.
FitReport spectrum_slope(const CoefficientVector& state, SpectrumWeight weight);

}  // namespace ringflow
