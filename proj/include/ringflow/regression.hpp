#pragma once

#include <cmath>
#include <span>

#include "ringflow/errors.hpp"

namespace ringflow {

template <typename Scalar>
struct LinearFit {
  Scalar slope{};
  Scalar intercept{};
  Scalar slope_stderr{};
};

/// Unweighted ordinary least squares y = slope * x + intercept, with the usual
/// standard error of the slope (residual variance on n - 2 degrees of freedom).
template <typename Scalar>
LinearFit<Scalar> ordinary_least_squares(std::span<const Scalar> x, std::span<const Scalar> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 points for a fit");

  Scalar mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= Scalar(n);
  my /= Scalar(n);

  Scalar sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == Scalar(0)) throw Error(ErrorKind::InvalidArgument, "x values are all equal");

  LinearFit<Scalar> fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  Scalar ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  using std::sqrt;
  fit.slope_stderr = sqrt(ss / Scalar(n - 2) / sxx);
  return fit;
}

}  // namespace ringflow
