#include "ringflow/spectral.hpp"

#include <cmath>

#include "ringflow/errors.hpp"
#include "ringflow/phase.hpp"

namespace ringflow {

namespace {
constexpr int kMaxOperatorN = 10000;

void require_n(int n_max) {
  if (n_max == 0)
    throw Error(ErrorKind::DegenerateOperator, "n_max = 0: single state, current is identically 0");
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 1");
}
}  // namespace

Eigen::MatrixXd current_operator_matrix(int n_max) {
  require_n(n_max);
  if (n_max > kMaxOperatorN)
    throw Error(ErrorKind::InvalidArgument, "n_max must lie in [1, 10000]");
  const Eigen::Index size = n_max + 1;
  return Eigen::MatrixXd::NullaryExpr(size, size, [](Eigen::Index m, Eigen::Index n) {
    return static_cast<double>(m + n) / (2.0 * kPi);
  });
}

SpectralPair closed_form_spectrum(int n_max) {
  require_n(n_max);
  const double n = n_max;
  SpectralPair out;
  out.n_max = n_max;
  out.a_plus = std::sqrt(n * (2.0 * n + 1.0) / 6.0);
  out.a_minus = -out.a_plus;

  const double root = std::sqrt((4.0 * n + 2.0) / (3.0 * n));
  const double prefactor = n * (n + 1.0) / (4.0 * kPi);
  out.lambda_plus = prefactor * (1.0 + root);
  out.lambda_minus = prefactor * (1.0 - root);

  const double third = (2.0 * n + 1.0) / 3.0;
  out.A_plus = 1.0 / std::sqrt(n * (n + 1.0) * (third + out.a_plus));
  out.A_minus = 1.0 / std::sqrt(n * (n + 1.0) * (third - out.a_plus));

  const Eigen::VectorXd m = Eigen::VectorXd::LinSpaced(n_max + 1, 0.0, n);
  out.chi_plus = out.A_plus * (m.array() + out.a_plus).matrix();
  out.chi_minus = out.A_minus * (m.array() + out.a_minus).matrix();
  return out;
}

double verify_rank2_decomposition(int n_max) {
  const SpectralPair sp = closed_form_spectrum(n_max);
  const Eigen::Index size = n_max + 1;
  double worst = 0.0;
  for (Eigen::Index n = 0; n < size; ++n) {
    for (Eigen::Index m = 0; m < size; ++m) {
      const double rebuilt = sp.lambda_plus * sp.chi_plus[m] * sp.chi_plus[n] +
                             sp.lambda_minus * sp.chi_minus[m] * sp.chi_minus[n];
      worst = std::max(worst, std::abs(rebuilt - static_cast<double>(m + n) / (2.0 * kPi)));
    }
  }
  return worst;
}

std::pair<double, double> instantaneous_bounds(int n_max) {
  const SpectralPair sp = closed_form_spectrum(n_max);
  return {sp.lambda_minus, sp.lambda_plus};
}

double current_expectation(const Eigen::VectorXd& coeffs) {
  // sum_{mn} (m+n) c_m c_n = 2 (sum m c_m)(sum c_n)
  double weighted = 0.0;
  for (Eigen::Index m = 1; m < coeffs.size(); ++m) weighted += static_cast<double>(m) * coeffs[m];
  return weighted * coeffs.sum() / kPi;
}

}  // namespace ringflow
