#include "ringflow/dynamics.hpp"

#include <charconv>

#include "ringflow/errors.hpp"
#include "ringflow/parallel.hpp"
#include "ringflow/phase.hpp"

namespace ringflow {

double TimeSeries::time_at(Eigen::Index i) const noexcept {
  const Eigen::Index n = count();
  if (n < 2) return t_start;
  if (i == n - 1) return t_end;
  return t_start + static_cast<double>(i) / static_cast<double>(n - 1) * (t_end - t_start);
}

Amplitudes amplitudes_at(const CoefficientVector& state, double t) {
  const Eigen::VectorXd& c = state.coeffs();
  double re0 = 0.0, im0 = 0.0, re1 = 0.0, im1 = 0.0;
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    if (c[m] == 0.0) continue;
    const double r = reduce_phase(static_cast<std::int64_t>(m) * m, t);
    const double cr = c[m] * std::cos(r);
    const double ci = -c[m] * std::sin(r);
    const double md = static_cast<double>(m);
    re0 += cr;
    im0 += ci;
    re1 += md * cr;
    im1 += md * ci;
  }
  return {{re0, im0}, {re1, im1}};
}

double current_at(const CoefficientVector& state, double t) {
  const Amplitudes a = amplitudes_at(state, t);
  return (a.h0.real() * a.h1.real() + a.h0.imag() * a.h1.imag()) / kPi;
}

TimeSeries sample_current(const CoefficientVector& state, double t_start, double t_end, Eigen::Index count) {
  if (count < 2) throw Error(ErrorKind::InvalidGrid, "need at least 2 samples");
  if (!(t_start < t_end)) throw Error(ErrorKind::InvalidGrid, "t_start must be below t_end");

  TimeSeries out;
  out.t_start = t_start;
  out.t_end = t_end;
  out.state_digest = state.digest();
  out.samples.resize(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      out.samples[idx] = current_at(state, out.time_at(idx));
    }
  });
  return out;
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  char buf[64];
  out << "t,j\n";
  for (Eigen::Index i = 0; i < series.count(); ++i) {
    auto r = std::to_chars(buf, buf + sizeof buf, series.time_at(i));
    *r.ptr++ = ',';
    r = std::to_chars(r.ptr, buf + sizeof buf, series.samples[i]);
    *r.ptr++ = '\n';
    out.write(buf, r.ptr - buf);
  }
}

namespace reference {

double current_double_sum(const CoefficientVector& state, double t) {
  if (state.n_max() > kMaxDoubleSumN)
    throw Error(ErrorKind::InvalidArgument, "double-sum current is limited to N <= 500");
  const Eigen::VectorXd& c = state.coeffs();
  double sum = 0.0;
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    for (Eigen::Index n = 0; n < c.size(); ++n) {
      const std::int64_t d = static_cast<std::int64_t>(m) * m - static_cast<std::int64_t>(n) * n;
      sum += c[m] * c[n] * static_cast<double>(m + n) * std::cos(reduce_phase(d, t));
    }
  }
  return sum / (2.0 * kPi);
}

double current_rank2(const CoefficientVector& state, const SpectralPair& spectrum, double t) {
  if (spectrum.n_max != state.n_max())
    throw Error(ErrorKind::DimensionMismatch, "spectrum and state have different N");
  const Eigen::VectorXd& c = state.coeffs();
  std::complex<double> plus = 0.0, minus = 0.0;
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    const std::complex<double> z = c[m] * phasor(static_cast<std::int64_t>(m) * m, t);
    plus += spectrum.chi_plus[m] * z;
    minus += spectrum.chi_minus[m] * z;
  }
  return spectrum.lambda_plus * std::norm(plus) + spectrum.lambda_minus * std::norm(minus);
}

}  // namespace reference

}  // namespace ringflow
