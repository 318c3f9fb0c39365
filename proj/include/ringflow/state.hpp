#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include <Eigen/Core>

namespace ringflow {

/// Window half-width at which the probability-transfer bound is attained.
inline constexpr double kOptimalAlpha = 1.163635;

/// Real expansion coefficients c_0..c_N of a state built from angular-momentum
/// eigenstates |0>..|N>, together with the window half-width alpha it refers to.
///
/// Always unit norm. The global sign is fixed by the producer (normalize(),
/// the optimizer and the guess builder put the first nonzero entry positive).
class CoefficientVector {
 public:
  /// Wraps coefficients that are already unit norm (within `tolerance`).
  /// Throws InvalidState otherwise, InvalidArgument for fewer than 2 entries.
  static CoefficientVector from_normalized(Eigen::VectorXd coeffs, double alpha,
                                           double tolerance = 1e-12);

  int n_max() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  double operator[](Eigen::Index m) const noexcept { return coeffs_[m]; }
  double alpha() const noexcept { return alpha_; }

  CoefficientVector with_alpha(double alpha) const;

  /// FNV-1a over n_max, alpha and the coefficient bytes.
  std::uint64_t digest() const noexcept;

 private:
  CoefficientVector(Eigen::VectorXd coeffs, double alpha) : coeffs_(std::move(coeffs)), alpha_(alpha) {}

  Eigen::VectorXd coeffs_;
  double alpha_;
};

struct DimensionalParams {
  double mass = 1.0;
  double radius = 1.0;
  double hbar = 1.0;

  /// Throws InvalidArgument unless every field is finite and positive.
  void validate() const;
  /// 2 M R^2 / hbar: the time unit.
  double time_unit() const;
};

/// Divides by the Euclidean norm and flips the sign so the first nonzero
/// entry is positive. Throws ZeroVector / InvalidValue / InvalidArgument.
CoefficientVector normalize(std::span<const double> coeffs, double alpha = kOptimalAlpha);
CoefficientVector normalize(const Eigen::VectorXd& coeffs, double alpha = kOptimalAlpha);

/// Single basis state |m> within span{|0>..|n_max>}.
CoefficientVector basis_state(int n_max, int m, double alpha = kOptimalAlpha);

double to_dimensionless_time(double seconds, const DimensionalParams& params);
double to_dimensional_time(double t, const DimensionalParams& params);
double to_dimensional_current(double j, const DimensionalParams& params);

/// <E> = hbar^2 / (2 M R^2) * sum m^2 c_m^2.
double mean_energy(const CoefficientVector& state, const DimensionalParams& params = {});

// Text format: header `N=<int> alpha=<repr>`, then one coefficient per line in
// shortest round-trip decimal.
void save_state(const std::filesystem::path& path, const CoefficientVector& state);
CoefficientVector load_state(const std::filesystem::path& path);

void write_state(std::ostream& out, const CoefficientVector& state);
CoefficientVector read_state(std::istream& in);

}  // namespace ringflow
