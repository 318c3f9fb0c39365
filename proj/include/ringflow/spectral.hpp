#pragma once

#include <utility>

#include <Eigen/Core>

#include "ringflow/state.hpp"

namespace ringflow {

/// Closed-form eigenstructure of the current operator on span{|0>..|N>}.
/// The operator has rank 2; these are its only nonzero eigenpairs.
struct SpectralPair {
  int n_max = 0;
  double a_plus = 0, a_minus = 0;            // +-sqrt(N(2N+1)/6)
  double lambda_plus = 0, lambda_minus = 0;  // instantaneous current bounds
  double A_plus = 0, A_minus = 0;            // normalization constants
  Eigen::VectorXd chi_plus, chi_minus;       // unit norm, positive last entry
};

/// Dense (N+1)x(N+1) matrix with entries (m + n) / 2pi.
/// Throws DegenerateOperator for n_max == 0, InvalidArgument outside [1, 10^4].
Eigen::MatrixXd current_operator_matrix(int n_max);

SpectralPair closed_form_spectrum(int n_max);

/// max_{m,n} |lambda+ chi+_m chi+_n + lambda- chi-_m chi-_n - (m+n)/2pi|.
double verify_rank2_decomposition(int n_max);

/// (lambda-, lambda+): the lower and upper bound on j_N(t) for every state and t.
std::pair<double, double> instantaneous_bounds(int n_max);

/// <psi|j_N|psi> for a static state.
double current_expectation(const Eigen::VectorXd& coeffs);

}  // namespace ringflow
