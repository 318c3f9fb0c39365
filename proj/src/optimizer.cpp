#include "ringflow/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "ringflow/errors.hpp"
#include "ringflow/lobpcg.hpp"
#include "ringflow/parallel.hpp"
#include "ringflow/phase.hpp"

namespace ringflow {

namespace {

constexpr int kBlockSize = 3;
constexpr Eigen::Index kMinIterativeSize = 12;
constexpr double kResidualCeiling = 1e-10;
constexpr double kDegeneracyTolerance = 1e-9;

void require_inputs(int n_max, double alpha) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 1");
  if (!std::isfinite(alpha) || alpha <= 0.0) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
}

// Columns: the analytic guess state, then two seeded random vectors weighted
// towards low m, where the minimizer lives.
Eigen::MatrixXd initial_block(int n_max, double alpha) {
  const Eigen::Index size = n_max + 1;
  Eigen::MatrixXd x(size, kBlockSize);
  x(0, 0) = 1.0;
  for (Eigen::Index m = 1; m < size; ++m) x(m, 0) = -0.5 * sinc_of_product(static_cast<std::int64_t>(m) * m, alpha);

  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> normal;
  for (Eigen::Index j = 1; j < kBlockSize; ++j)
    for (Eigen::Index m = 0; m < size; ++m) x(m, j) = normal(rng) / (1.0 + static_cast<double>(m));
  return x;
}

Eigen::VectorXd sign_fixed(Eigen::VectorXd v) {
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    if (v[m] != 0.0) {
      if (v[m] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

MinimizationResult finish(double p_min, double next, Eigen::VectorXd vec, Eigen::VectorXd alt, double alpha,
                          int iterations, double residual, bool matrix_free) {
  const bool degenerate = (next - p_min) <= kDegeneracyTolerance * std::max(1.0, std::abs(p_min));
  if (degenerate && std::abs(alt[0]) > std::abs(vec[0])) vec = std::move(alt);
  vec.normalize();
  return MinimizationResult{
      .p_min = p_min,
      .state = CoefficientVector::from_normalized(sign_fixed(std::move(vec)), alpha, 1e-10),
      .iterations = iterations,
      .residual_norm = residual,
      .next_eigenvalue = next,
      .degenerate = degenerate,
      .matrix_free = matrix_free,
  };
}

template <typename Op>
MinimizationResult solve_iterative(const Op& op, int n_max, double alpha, const MinimizerOptions& options,
                                   bool matrix_free) {
  LobpcgOptions lopts;
  lopts.residual_target = std::min(options.tol * kernel_norm_bound(n_max, alpha), kResidualCeiling);
  lopts.max_iterations = options.max_iterations;
  const LobpcgResult r = lobpcg_smallest(op, initial_block(n_max, alpha), lopts);
  return finish(r.eigenvalues[0], r.eigenvalues[1], r.eigenvectors.col(0), r.eigenvectors.col(1), alpha,
                r.iterations, r.residuals[0], matrix_free);
}

}  // namespace

KernelMatrix build_kernel(int n_max, double alpha, std::size_t memory_cap_bytes) {
  require_inputs(n_max, alpha);
  const auto size = static_cast<std::size_t>(n_max) + 1;
  if (size * size * sizeof(double) > memory_cap_bytes)
    throw Error(ErrorKind::MemoryCap, "dense kernel for N=" + std::to_string(n_max) +
                                          " exceeds the memory cap; use the matrix-free operator");

  KernelMatrix out{n_max, alpha, Eigen::MatrixXd(size, size)};
  Eigen::MatrixXd& k = out.entries;
  parallel_for(size, [&](std::size_t begin, std::size_t end) {
    for (auto m = static_cast<Eigen::Index>(begin); m < static_cast<Eigen::Index>(end); ++m) {
      const std::int64_t m2 = static_cast<std::int64_t>(m) * m;
      k(m, m) = 2.0 * alpha * static_cast<double>(m) / kPi;
      for (Eigen::Index n = m + 1; n < static_cast<Eigen::Index>(size); ++n) {
        const std::int64_t d = m2 - static_cast<std::int64_t>(n) * n;
        k(m, n) = alpha / kPi * static_cast<double>(m + n) * sinc_of_product(d, alpha);
      }
    }
  });
  k.triangularView<Eigen::StrictlyLower>() = k.transpose();
  return out;
}

DenseKernelOperator::DenseKernelOperator(KernelMatrix kernel)
    : kernel_(std::move(kernel)), diagonal_(kernel_.entries.diagonal()) {}

void DenseKernelOperator::apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const {
  y.noalias() = kernel_.entries * x;
}

MatrixFreeKernelOperator::MatrixFreeKernelOperator(int n_max, double alpha) {
  require_inputs(n_max, alpha);
  const Eigen::Index size = n_max + 1;
  sin_.resize(size);
  cos_.resize(size);
  diagonal_.resize(size);
  inverse_.resize(size);
  inverse_[0] = 0.0;
  for (Eigen::Index m = 0; m < size; ++m) {
    const double r = reduce_phase(static_cast<std::int64_t>(m) * m, alpha);
    sin_[m] = std::sin(r);
    cos_[m] = std::cos(r);
    diagonal_[m] = 2.0 * alpha * static_cast<double>(m) / kPi;
    if (m > 0) inverse_[m] = 1.0 / static_cast<double>(m);
  }
}

void MatrixFreeKernelOperator::apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const {
  const Eigen::Index size = rows();
  const Eigen::Index cols = x.cols();
  const Eigen::MatrixXd cx = cos_.asDiagonal() * x;
  const Eigen::MatrixXd sx = sin_.asDiagonal() * x;
  y.resize(size, cols);

  parallel_for(static_cast<std::size_t>(size), [&](std::size_t begin, std::size_t end) {
    for (auto m = static_cast<Eigen::Index>(begin); m < static_cast<Eigen::Index>(end); ++m) {
      const Eigen::Index above = size - 1 - m;
      const auto below_inv = inverse_.segment(1, m);
      const auto above_inv = inverse_.segment(1, above);
      for (Eigen::Index j = 0; j < cols; ++j) {
        // (T v)_m = sum_{n<m} v_n/(m-n) - sum_{n>m} v_n/(n-m)
        double tc = 0.0, ts = 0.0;
        if (m > 0) {
          tc += below_inv.dot(cx.col(j).head(m).reverse());
          ts += below_inv.dot(sx.col(j).head(m).reverse());
        }
        if (above > 0) {
          tc -= above_inv.dot(cx.col(j).segment(m + 1, above));
          ts -= above_inv.dot(sx.col(j).segment(m + 1, above));
        }
        y(m, j) = (sin_[m] * tc - cos_[m] * ts) / kPi + diagonal_[m] * x(m, j);
      }
    }
  });
}

double kernel_norm_bound(int n_max, double alpha) {
  // |K_mn| <= 1/(pi |m-n|) off the diagonal; the harmonic sum bounds each row.
  const double n = n_max;
  return 2.0 * alpha * n / kPi + 2.0 / kPi * (std::log(n) + 1.0);
}

MinimizationResult minimize_transfer(int n_max, double alpha, double tol) {
  MinimizerOptions options;
  options.tol = tol;
  return minimize_transfer(n_max, alpha, options);
}

MinimizationResult minimize_transfer(int n_max, double alpha, const MinimizerOptions& options) {
  require_inputs(n_max, alpha);
  if (!(options.tol >= 1e-12)) throw Error(ErrorKind::InvalidArgument, "tol must be at least 1e-12");
  const Eigen::Index size = n_max + 1;

  if (size < kMinIterativeSize) {
    const KernelMatrix k = build_kernel(n_max, alpha, options.memory_cap_bytes);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.entries);
    const Eigen::VectorXd v = es.eigenvectors().col(0);
    const double residual = (k.entries * v - es.eigenvalues()[0] * v).norm();
    return finish(es.eigenvalues()[0], es.eigenvalues()[1], v, es.eigenvectors().col(1), alpha, 0, residual,
                  false);
  }
  if (n_max > options.dense_limit) {
    const MatrixFreeKernelOperator op(n_max, alpha);
    return solve_iterative(op, n_max, alpha, options, true);
  }
  const DenseKernelOperator op(build_kernel(n_max, alpha, options.memory_cap_bytes));
  return solve_iterative(op, n_max, alpha, options, false);
}

double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den == 0.0) return x1;
  return std::clamp(x1 - 0.5 * num / den, x0, x2);
}

ScanResult scan_alpha(int n_max, std::span<const double> alpha_grid, double tol) {
  if (alpha_grid.empty()) throw Error(ErrorKind::InvalidArgument, "alpha grid is empty");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0) || !std::isfinite(alpha_grid[i]))
      throw Error(ErrorKind::InvalidArgument, "alpha grid values must be positive");
    if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "alpha grid must be strictly increasing");
  }

  ScanResult out;
  out.points.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    ScanPoint pt;
    pt.alpha = alpha;
    try {
      pt.p_min = minimize_transfer(n_max, alpha, tol).p_min;
    } catch (const Error& e) {
      pt.ok = false;
      pt.p_min = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.what();
    }
    out.points.push_back(std::move(pt));
  }

  const auto& pts = out.points;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].ok && (!best || pts[i].p_min < pts[*best].p_min)) best = i;

  auto refine = [&](std::size_t i) {
    ScanMinimum sm{pts[i].alpha, pts[i].p_min, pts[i].alpha, pts[i].p_min};
    if (i == 0 || i + 1 >= pts.size() || !pts[i - 1].ok || !pts[i + 1].ok) return sm;
    sm.refined_alpha = parabola_vertex(pts[i - 1].alpha, pts[i - 1].p_min, pts[i].alpha, pts[i].p_min,
                                       pts[i + 1].alpha, pts[i + 1].p_min);
    try {
      sm.refined_p_min = minimize_transfer(n_max, sm.refined_alpha, tol).p_min;
    } catch (const Error&) {
      sm.refined_p_min = std::numeric_limits<double>::infinity();
    }
    // p_min(alpha) is not exactly parabolic; keep the vertex only if it improves on the grid.
    if (!(sm.refined_p_min <= pts[i].p_min)) {
      sm.refined_alpha = pts[i].alpha;
      sm.refined_p_min = pts[i].p_min;
    }
    return sm;
  };

  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (!pts[i].ok || !pts[i - 1].ok || !pts[i + 1].ok) continue;
    if (pts[i].p_min < pts[i - 1].p_min && pts[i].p_min <= pts[i + 1].p_min) {
      out.local_minima.push_back(refine(i));
      if (best && *best == i) out.global_minimum = out.local_minima.back();
    }
  }
  if (best && !out.global_minimum) out.global_minimum = refine(*best);
  return out;
}

}  // namespace ringflow
