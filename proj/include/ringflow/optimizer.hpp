#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ringflow/state.hpp"

namespace ringflow {

/// K_mn = (alpha/pi) (m+n) sinc[alpha (m^2 - n^2)]; c^T K c is the probability
/// transfer of the state c over [-alpha, alpha].
struct KernelMatrix {
  int n_max = 0;
  double alpha = 0.0;
  Eigen::MatrixXd entries;
};

inline constexpr std::size_t kDefaultKernelMemoryCap = std::size_t{1} << 30;  // 1 GiB

/// Throws MemoryCap if the dense matrix would exceed `memory_cap_bytes`
/// (use the matrix-free operator instead).
KernelMatrix build_kernel(int n_max, double alpha, std::size_t memory_cap_bytes = kDefaultKernelMemoryCap);

/// Y = K X with K held densely.
class DenseKernelOperator {
 public:
  explicit DenseKernelOperator(KernelMatrix kernel);

  Eigen::Index rows() const noexcept { return kernel_.entries.rows(); }
  const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }
  void apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const;
  const KernelMatrix& kernel() const noexcept { return kernel_; }

 private:
  KernelMatrix kernel_;
  Eigen::VectorXd diagonal_;
};

/// Y = K X without storing K. Uses
///   K_mn = (s_m c_n - c_m s_n) / (pi (m - n)),  s_m = sin(alpha m^2), c_m = cos(alpha m^2),
/// so a product costs two Toeplitz sweeps with 1/(m-n) and O(N) memory.
class MatrixFreeKernelOperator {
 public:
  MatrixFreeKernelOperator(int n_max, double alpha);

  Eigen::Index rows() const noexcept { return sin_.size(); }
  const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }
  void apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const;

 private:
  Eigen::VectorXd sin_, cos_, diagonal_, inverse_;
};

/// Gershgorin upper bound on ||K||_2.
double kernel_norm_bound(int n_max, double alpha);

struct MinimizerOptions {
  double tol = 1e-12;
  int max_iterations = 2000;
  int dense_limit = 4000;  // above this N the matrix-free operator is used
  std::size_t memory_cap_bytes = kDefaultKernelMemoryCap;
};

struct MinimizationResult {
  double p_min = 0.0;
  CoefficientVector state;
  int iterations = 0;
  double residual_norm = 0.0;
  double next_eigenvalue = 0.0;  // second smallest, for the gap
  bool degenerate = false;       // bottom two eigenvalues coincide within 1e-9
  bool matrix_free = false;
};

/// Smallest eigenpair of K (the minimal probability transfer and the state
/// attaining it). Eigenvector sign is fixed so the first nonzero entry is > 0.
/// Throws ConvergenceFailure (carrying the best iterate) on hitting the cap.
MinimizationResult minimize_transfer(int n_max, double alpha, double tol = 1e-12);
MinimizationResult minimize_transfer(int n_max, double alpha, const MinimizerOptions& options);

struct ScanPoint {
  double alpha = 0.0;
  double p_min = 0.0;
  bool ok = true;
  std::string error;  // set when the solve failed at this alpha
};

struct ScanMinimum {
  double grid_alpha = 0.0;
  double grid_p_min = 0.0;
  double refined_alpha = 0.0;  // parabola vertex, or the grid point when the vertex is no better
  double refined_p_min = 0.0;  // p_min re-evaluated at refined_alpha
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::vector<ScanMinimum> local_minima;  // interior grid minima, refined
  std::optional<ScanMinimum> global_minimum;
};

/// p_min over a sorted grid of positive alpha values. A failed solve is
/// recorded on its point and does not abort the scan.
ScanResult scan_alpha(int n_max, std::span<const double> alpha_grid, double tol = 1e-12);

/// Vertex of the parabola through three points (x0<x1<x2).
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2);

}  // namespace ringflow
