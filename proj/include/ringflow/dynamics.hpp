#pragma once

#include <complex>
#include <cstdint>
#include <ostream>

#include <Eigen/Core>

#include "ringflow/spectral.hpp"
#include "ringflow/state.hpp"

namespace ringflow {

/// Uniform samples of j(t) on [t_start, t_end], both endpoints included.
struct TimeSeries {
  Eigen::VectorXd samples;
  double t_start = 0.0;
  double t_end = 0.0;
  std::uint64_t state_digest = 0;

  Eigen::Index count() const noexcept { return samples.size(); }
  /// Time of the zero-based sample index i.
  double time_at(Eigen::Index i) const noexcept;
};

/// h_0(t) = sum c_m e^{-i m^2 t} and h_1(t) = sum m c_m e^{-i m^2 t}.
struct Amplitudes {
  std::complex<double> h0;
  std::complex<double> h1;
};

Amplitudes amplitudes_at(const CoefficientVector& state, double t);

/// Dimensionless current j_N(t) = Re{conj(h_0) h_1} / pi, O(N) per call.
double current_at(const CoefficientVector& state, double t);

/// Throws InvalidGrid for count < 2 or t_start >= t_end.
TimeSeries sample_current(const CoefficientVector& state, double t_start, double t_end, Eigen::Index count);

/// Two-column CSV `t,j` with shortest round-trip numbers.
void write_series_csv(std::ostream& out, const TimeSeries& series);

namespace reference {

inline constexpr int kMaxDoubleSumN = 500;

/// (1/2pi) sum_{m,n} c_m c_n (m+n) cos((m^2-n^2) t); O(N^2), N <= 500.
double current_double_sum(const CoefficientVector& state, double t);

/// lambda+ |<chi+|psi(t)>|^2 + lambda- |<chi-|psi(t)>|^2.
double current_rank2(const CoefficientVector& state, const SpectralPair& spectrum, double t);

}  // namespace reference

}  // namespace ringflow
