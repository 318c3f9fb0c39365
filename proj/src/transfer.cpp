#include "ringflow/transfer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ringflow/errors.hpp"
#include "ringflow/parallel.hpp"
#include "ringflow/phase.hpp"
#include "ringflow/spectral.hpp"

namespace ringflow {

namespace {

constexpr std::int64_t kSweepBlock = 256;

std::int64_t checked_panels(std::int64_t panels, bool& rounded) {
  if (panels < kMinPanels) throw Error(ErrorKind::InvalidArgument, "need at least 64 panels");
  rounded = (panels % 2 != 0);
  return rounded ? panels + 1 : panels;
}

double simpson_weight(std::int64_t i, std::int64_t panels) noexcept {
  if (i == 0 || i == panels) return 1.0;
  return (i % 2 == 1) ? 4.0 : 2.0;
}

// Composite Simpson rule over [-alpha, alpha] for integrands g(h0, h1) that are
// even in t. Only the nodes t_k = k h, k = 0..panels/2, are visited. Each mode's
// phasor is advanced from node to node by a fixed rotation and recomputed
// exactly at the start of every block; block partial sums are added in block
// order, so the result does not depend on the thread count.
template <std::size_t Components, typename Integrand>
std::array<double, Components> simpson_sweep(const CoefficientVector& state, std::int64_t panels,
                                             Integrand&& g) {
  const Eigen::VectorXd& c = state.coeffs();
  std::vector<Eigen::Index> modes;
  for (Eigen::Index m = 0; m < c.size(); ++m)
    if (c[m] != 0.0) modes.push_back(m);
  const auto count = static_cast<Eigen::Index>(modes.size());
  Eigen::ArrayXd weight0(count), weight1(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    weight0[i] = c[modes[i]];
    weight1[i] = static_cast<double>(modes[i]) * c[modes[i]];
  }

  const double alpha = state.alpha();
  const double h = 2.0 * alpha / static_cast<double>(panels);
  const std::int64_t mid = panels / 2;
  const std::int64_t nodes = mid + 1;
  const auto blocks = static_cast<std::size_t>((nodes + kSweepBlock - 1) / kSweepBlock);

  std::vector<std::array<double, Components>> partial(blocks);
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    Eigen::ArrayXd re(count), im(count), step_re(count), step_im(count), next(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      const auto s = phasor(static_cast<std::int64_t>(modes[i]) * modes[i], h);
      step_re[i] = s.real();
      step_im[i] = s.imag();
    }
    for (std::size_t b = begin; b < end; ++b) {
      const std::int64_t first = static_cast<std::int64_t>(b) * kSweepBlock;
      const std::int64_t last = std::min(nodes, first + kSweepBlock);
      for (Eigen::Index i = 0; i < count; ++i) {
        const std::int64_t m2 = static_cast<std::int64_t>(modes[i]) * modes[i];
        const auto z = (first == mid) ? phasor(m2, alpha) : phasor(m2, static_cast<double>(first) * h);
        re[i] = z.real();
        im[i] = z.imag();
      }
      std::array<double, Components> acc{};
      for (std::int64_t k = first; k < last; ++k) {
        const std::complex<double> h0((weight0 * re).sum(), (weight0 * im).sum());
        const std::complex<double> h1((weight1 * re).sum(), (weight1 * im).sum());
        std::array<double, Components> value{};
        g(h0, h1, value);
        const double w = simpson_weight(mid + k, panels) * (k == 0 ? 1.0 : 2.0);
        for (std::size_t j = 0; j < Components; ++j) acc[j] += w * value[j];
        next = re * step_re - im * step_im;
        im = re * step_im + im * step_re;
        re = next;
      }
      partial[b] = acc;
    }
  });

  std::array<double, Components> sums{};
  for (const auto& p : partial)
    for (std::size_t j = 0; j < Components; ++j) sums[j] += p[j];
  for (double& v : sums) v *= h / 3.0;
  return sums;
}

}  // namespace

double transfer_double_sum(const CoefficientVector& state) {
  const Eigen::VectorXd& c = state.coeffs();
  const double alpha = state.alpha();
  const Eigen::Index size = c.size();

  // Row m contributes c_m (K_mm c_m + 2 sum_{n>m} K_mn c_n); rows are summed in order.
  Eigen::VectorXd rows(size);
  parallel_for(static_cast<std::size_t>(size), [&](std::size_t begin, std::size_t end) {
    for (auto m = static_cast<Eigen::Index>(begin); m < static_cast<Eigen::Index>(end); ++m) {
      if (c[m] == 0.0) {
        rows[m] = 0.0;
        continue;
      }
      const std::int64_t m2 = static_cast<std::int64_t>(m) * m;
      double off = 0.0;
      for (Eigen::Index n = m + 1; n < size; ++n) {
        const std::int64_t d = m2 - static_cast<std::int64_t>(n) * n;
        off += static_cast<double>(m + n) * sinc_of_product(d, alpha) * c[n];
      }
      rows[m] = c[m] * (2.0 * static_cast<double>(m) * c[m] + 2.0 * off);
    }
  });
  double total = 0.0;
  for (Eigen::Index m = 0; m < size; ++m) total += rows[m];
  return alpha / kPi * total;
}

QuadratureResult transfer_by_quadrature(const CoefficientVector& state, std::int64_t panels) {
  QuadratureResult out;
  out.panels = checked_panels(panels, out.panels_rounded);
  // j(-t) = j(t) for real coefficients.
  const auto sums = simpson_sweep<1>(state, out.panels, [](std::complex<double> h0, std::complex<double> h1, auto& v) {
    v[0] = (std::conj(h0) * h1).real() / kPi;
  });
  out.value = sums[0];
  return out;
}

TransferBreakdown transfer_decomposed(const CoefficientVector& state, std::int64_t panels) {
  TransferBreakdown out;
  out.alpha = state.alpha();
  out.panels = checked_panels(panels, out.panels_rounded);

  const SpectralPair sp = closed_form_spectrum(state.n_max());
  const double a = sp.a_plus;
  // |h1 + a h0|^2 is even in t because h(-t) = conj(h(t)).
  const auto sums = simpson_sweep<2>(state, out.panels, [a](std::complex<double> h0, std::complex<double> h1, auto& v) {
    v[0] = std::norm(h1 + a * h0);
    v[1] = std::norm(h1 - a * h0);
  });

  out.plus_part = sums[0] / (4.0 * kPi * sp.a_plus);
  out.minus_part = sums[1] / (4.0 * kPi * sp.a_minus);
  out.total = out.plus_part + out.minus_part;
  return out;
}

TransferBreakdown transfer_decomposed_exact(const CoefficientVector& state) {
  const Eigen::VectorXd& c = state.coeffs();
  const double alpha = state.alpha();
  const Eigen::Index size = c.size();
  const SpectralPair sp = closed_form_spectrum(state.n_max());

  Eigen::VectorXd plus(size), minus(size);
  for (Eigen::Index m = 0; m < size; ++m) {
    plus[m] = c[m] * (static_cast<double>(m) + sp.a_plus);
    minus[m] = c[m] * (static_cast<double>(m) + sp.a_minus);
  }

  // Row m contributes d_m (d_m + 2 sum_{n>m} S_mn d_n) for each weight vector d.
  Eigen::MatrixXd rows(size, 2);
  parallel_for(static_cast<std::size_t>(size), [&](std::size_t begin, std::size_t end) {
    for (auto m = static_cast<Eigen::Index>(begin); m < static_cast<Eigen::Index>(end); ++m) {
      if (c[m] == 0.0) {
        rows.row(m).setZero();
        continue;
      }
      const std::int64_t m2 = static_cast<std::int64_t>(m) * m;
      double off_plus = 0.0, off_minus = 0.0;
      for (Eigen::Index n = m + 1; n < size; ++n) {
        if (c[n] == 0.0) continue;
        const double s = sinc_of_product(m2 - static_cast<std::int64_t>(n) * n, alpha);
        off_plus += s * plus[n];
        off_minus += s * minus[n];
      }
      rows(m, 0) = plus[m] * (plus[m] + 2.0 * off_plus);
      rows(m, 1) = minus[m] * (minus[m] + 2.0 * off_minus);
    }
  });
  double sum_plus = 0.0, sum_minus = 0.0;
  for (Eigen::Index m = 0; m < size; ++m) {
    sum_plus += rows(m, 0);
    sum_minus += rows(m, 1);
  }

  TransferBreakdown out;
  out.alpha = alpha;
  out.plus_part = alpha / (2.0 * kPi * sp.a_plus) * sum_plus;
  out.minus_part = alpha / (2.0 * kPi * sp.a_minus) * sum_minus;
  out.total = out.plus_part + out.minus_part;
  return out;
}

std::int64_t suggested_panels(const CoefficientVector& state) {
  const Eigen::VectorXd& c = state.coeffs();
  Eigen::Index top = c.size() - 1;
  while (top > 0 && c[top] == 0.0) --top;
  const double omega = static_cast<double>(top) * static_cast<double>(top);
  auto panels = static_cast<std::int64_t>(std::ceil(16.0 * state.alpha() * omega));
  panels = std::max(panels, kMinPanels);
  return panels + (panels % 2);
}

}  // namespace ringflow
