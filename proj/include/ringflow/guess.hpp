#pragma once

#include "ringflow/state.hpp"

namespace ringflow {

/// Analytic approximation to the backflow-maximizing state:
///   c_0 = C_N,  c_m = -(C_N / 2) sinc(alpha m^2)  (1 <= m <= N),
///   C_N = (1 + 1/4 sum_{m>=1} sinc^2(alpha m^2))^{-1/2}.
struct GuessState {
  int n_max = 0;
  double alpha = 0.0;
  double normalization = 0.0;  // C_N
  CoefficientVector state;
};

GuessState build_guess(int n_max, double alpha = kOptimalAlpha);

/// |<a|b>|^2 for real states. Throws DimensionMismatch if N differs.
double fidelity(const CoefficientVector& a, const CoefficientVector& b);

/// Probability transfer of the guess state over [-alpha, alpha].
double guess_transfer(int n_max, double alpha = kOptimalAlpha);

/// Upper bound on the squared norm the N -> infinity guess state puts on
/// m > N, i.e. the truncation error of the finite representation.
double guess_tail_bound(int n_max, double alpha);

}  // namespace ringflow
