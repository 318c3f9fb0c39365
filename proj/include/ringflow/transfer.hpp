#pragma once

#include <cstdint>

#include "ringflow/state.hpp"

namespace ringflow {

/// Probability transfer through theta = 0 over t in [-alpha, alpha], split
/// into its non-negative and non-positive parts.
struct TransferBreakdown {
  double total = 0.0;
  double plus_part = 0.0;   // >= 0
  double minus_part = 0.0;  // <= 0
  double alpha = 0.0;
  std::int64_t panels = 0;
  bool panels_rounded = false;  // an odd panel count was bumped to even
};

struct QuadratureResult {
  double value = 0.0;
  std::int64_t panels = 0;
  bool panels_rounded = false;
};

inline constexpr std::int64_t kMinPanels = 64;

/// (alpha/pi) sum_{mn} c_m c_n (m+n) sinc[alpha (m^2 - n^2)], alpha taken from the state.
double transfer_double_sum(const CoefficientVector& state);

/// Composite Simpson integral of current_at over [-alpha, alpha].
QuadratureResult transfer_by_quadrature(const CoefficientVector& state, std::int64_t panels);

/// P = P(+) + P(-) with P(+-) = (1/4pi a+-) int |sum c_m (m + a+-) e^{-i m^2 t}|^2 dt,
/// each part integrated by composite Simpson.
TransferBreakdown transfer_decomposed(const CoefficientVector& state, std::int64_t panels);

/// The same split with both time integrals done in closed form:
/// P(+-) = (alpha / 2pi a+-) sum_{m,n} d_m d_n sinc(alpha (m^2 - n^2)), d_m = c_m (m + a+-).
/// O(N^2); `panels` is reported as 0.
TransferBreakdown transfer_decomposed_exact(const CoefficientVector& state);

/// Even panel count giving 0.125 rad per panel at the highest frequency
/// present in the current (M^2 for the largest m with c_m != 0).
std::int64_t suggested_panels(const CoefficientVector& state);

}  // namespace ringflow
