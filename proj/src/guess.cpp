#include "ringflow/guess.hpp"

#include <algorithm>
#include <cmath>

#include "ringflow/errors.hpp"
#include "ringflow/phase.hpp"
#include "ringflow/transfer.hpp"

namespace ringflow {

GuessState build_guess(int n_max, double alpha) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 1");
  if (!std::isfinite(alpha) || alpha <= 0.0) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");

  const Eigen::Index size = n_max + 1;
  Eigen::VectorXd s(size);
  s[0] = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index m = 1; m < size; ++m) {
    s[m] = sinc_of_product(static_cast<std::int64_t>(m) * m, alpha);
    sum_sq += s[m] * s[m];
  }
  const double norm = 1.0 / std::sqrt(1.0 + 0.25 * sum_sq);

  Eigen::VectorXd c = -0.5 * norm * s;
  c[0] = norm;
  return GuessState{n_max, alpha, norm, CoefficientVector::from_normalized(std::move(c), alpha, 1e-12)};
}

double fidelity(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.n_max() != b.n_max())
    throw Error(ErrorKind::DimensionMismatch,
                "states have N=" + std::to_string(a.n_max()) + " and N=" + std::to_string(b.n_max()));
  const double overlap = a.coeffs().dot(b.coeffs());
  return std::min(1.0, overlap * overlap);
}

double guess_transfer(int n_max, double alpha) { return transfer_double_sum(build_guess(n_max, alpha).state); }

double guess_tail_bound(int n_max, double alpha) {
  // c_m^2 <= 1 / (4 alpha^2 m^4) and sum_{m>N} m^-4 <= 1 / (3 N^3).
  const double n = n_max;
  return 1.0 / (12.0 * alpha * alpha * n * n * n);
}

}  // namespace ringflow
