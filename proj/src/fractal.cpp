#include "ringflow/fractal.hpp"

#include <algorithm>
#include <cmath>

#include "ringflow/errors.hpp"
#include "ringflow/parallel.hpp"
#include "ringflow/regression.hpp"

namespace ringflow {

namespace {

constexpr int kMinFitStrides = 5;
constexpr int kBinsPerDecade = 16;
constexpr int kMinModesPerBin = 2;
constexpr int kMinSpectrumBins = 8;
constexpr double kDimensionLow = 0.5;
constexpr double kDimensionHigh = 2.5;

void flag_dimension(FitReport& report) {
  if (!(report.dimension > kDimensionLow && report.dimension < kDimensionHigh)) {
    report.flagged = true;
    report.note = "dimension outside (0.5, 2.5)";
  }
}

FitReport fit_points(std::vector<std::pair<double, double>> points) {
  std::vector<double> x, y;
  x.reserve(points.size());
  y.reserve(points.size());
  for (const auto& [px, py] : points) {
    x.push_back(px);
    y.push_back(py);
  }
  const auto fit = ordinary_least_squares<double>(x, y);
  FitReport report;
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.slope_stderr = fit.slope_stderr;
  report.points = std::move(points);
  return report;
}

}  // namespace

void HiguchiConfig::validate(Eigen::Index series_length) const {
  if (k_values.empty()) throw Error(ErrorKind::InvalidArgument, "no strides given");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 1) throw Error(ErrorKind::InvalidArgument, "strides must be >= 1");
    if (i > 0 && k_values[i] <= k_values[i - 1])
      throw Error(ErrorKind::InvalidArgument, "strides must be sorted and distinct");
  }
  if (k_values.back() > series_length - 1)
    throw Error(ErrorKind::InvalidArgument, "largest stride exceeds series length - 1");
  if (fit_range && fit_range->first > fit_range->second)
    throw Error(ErrorKind::InvalidArgument, "fit range is empty");
}

std::vector<int> default_strides(int k_max) {
  if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 1");
  std::vector<int> ks;
  for (int k : {1, 2})
    if (k <= k_max) ks.push_back(k);
  for (int j = 8;; ++j) {
    const int k = static_cast<int>(std::floor(std::exp2(j / 4.0) + 0.5));
    if (k > k_max) break;
    if (ks.empty() || k > ks.back()) ks.push_back(k);
  }
  return ks;
}

double higuchi_lengths(std::span<const double> series, int k) {
  const auto size = static_cast<std::int64_t>(series.size());
  if (k < 1 || k > size - 1) throw Error(ErrorKind::InvalidArgument, "stride must lie in [1, S-1]");
  if ((size - k) / k == 0)
    throw Error(ErrorKind::StrideTooLarge, "stride " + std::to_string(k) + " leaves an offset with no increments");

  const double kk = k;
  double total = 0.0;
  for (std::int64_t s = 1; s <= k; ++s) {
    const std::int64_t steps = (size - s) / k;
    double path = 0.0;
    for (std::int64_t r = 1; r <= steps; ++r) {
      const std::int64_t hi = s - 1 + r * k;
      path += std::abs(series[static_cast<std::size_t>(hi)] - series[static_cast<std::size_t>(hi - k)]);
    }
    total += static_cast<double>(size - 1) / (static_cast<double>(steps) * kk * kk) * path;
  }
  return total / kk;
}

double higuchi_lengths(const TimeSeries& series, int k) {
  return higuchi_lengths(std::span<const double>(series.samples.data(), static_cast<std::size_t>(series.count())), k);
}

FitReport higuchi_dimension(std::span<const double> series, const HiguchiConfig& config) {
  config.validate(static_cast<Eigen::Index>(series.size()));
  std::vector<int> ks;
  for (int k : config.k_values)
    if (!config.fit_range || (k >= config.fit_range->first && k <= config.fit_range->second)) ks.push_back(k);
  if (static_cast<int>(ks.size()) < kMinFitStrides)
    throw Error(ErrorKind::InvalidArgument, "need at least 5 strides in the fit");

  std::vector<double> lengths(ks.size());
  parallel_for(ks.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) lengths[i] = higuchi_lengths(series, ks[i]);
  });

  std::vector<std::pair<double, double>> points;
  points.reserve(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(lengths[i] > 0.0))
      throw Error(ErrorKind::DegenerateSeries, "curve length is zero at k=" + std::to_string(ks[i]));
    points.emplace_back(std::log2(static_cast<double>(ks[i])), std::log2(lengths[i]));
  }
  FitReport report = fit_points(std::move(points));
  report.dimension = -report.slope;
  flag_dimension(report);
  return report;
}

FitReport higuchi_dimension(const TimeSeries& series, const HiguchiConfig& config) {
  return higuchi_dimension(
      std::span<const double>(series.samples.data(), static_cast<std::size_t>(series.count())), config);
}

FitReport spectrum_slope(const CoefficientVector& state, SpectrumWeight weight) {
  const int n_max = state.n_max();
  if (n_max < 100) throw Error(ErrorKind::InvalidArgument, "spectrum fit needs N >= 100");
  const double l_lo = std::sqrt(static_cast<double>(n_max));
  const double l_hi = std::pow(static_cast<double>(n_max), 1.8);

  struct Bin {
    double l_sum = 0.0;
    double p_sum = 0.0;
    int modes = 0;
  };
  std::vector<Bin> bins;
  Bin pending;
  long pending_index = -1;

  auto emit = [&] {
    if (pending.modes == 0) return;
    if (pending.modes < kMinModesPerBin) return;  // keep accumulating into the next bin
    bins.push_back(pending);
    pending = Bin{};
  };

  for (int m = 1; m <= n_max; ++m) {
    const double l = static_cast<double>(m) * m;
    if (l < l_lo || l > l_hi) continue;
    const double amp = state[m] * (weight == SpectrumWeight::M ? static_cast<double>(m) : 1.0);
    const double power = amp * amp / (2.0 * m);
    const auto index = static_cast<long>(std::floor(kBinsPerDecade * std::log10(l)));
    if (index != pending_index) {
      emit();
      pending_index = index;
    }
    pending.l_sum += l;
    pending.p_sum += power;
    ++pending.modes;
  }
  if (pending.modes >= kMinModesPerBin || bins.empty()) {
    if (pending.modes > 0) bins.push_back(pending);
  } else if (pending.modes > 0) {
    bins.back().l_sum += pending.l_sum;
    bins.back().p_sum += pending.p_sum;
    bins.back().modes += pending.modes;
  }

  std::vector<std::pair<double, double>> points;
  for (const Bin& b : bins) {
    if (!(b.p_sum > 0.0)) continue;
    points.emplace_back(std::log2(b.l_sum / b.modes), std::log2(b.p_sum / b.modes));
  }
  if (static_cast<int>(points.size()) < kMinSpectrumBins)
    throw Error(ErrorKind::InsufficientRange,
                "only " + std::to_string(points.size()) + " nonempty spectrum bins, need 8");

  FitReport report = fit_points(std::move(points));
  report.beta = -report.slope;
  report.dimension = (5.0 - report.beta) / 2.0;
  if (!(report.beta > 1.0 && report.beta <= 3.0)) {
    report.flagged = true;
    report.note = "beta outside (1, 3]: no fractal power-law regime";
  } else {
    flag_dimension(report);
  }
  return report;
}

}  // namespace ringflow
