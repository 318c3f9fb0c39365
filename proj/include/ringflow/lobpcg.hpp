#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Dense>

#include "ringflow/errors.hpp"

namespace ringflow {

struct LobpcgOptions {
  double residual_target = 1e-10;  // on column 0, absolute 2-norm
  double stall_tolerance = 1e-13;  // relative change of the lowest Ritz value
  int stall_window = 10;           // iterations over which the change is measured
  int max_iterations = 2000;
  int refresh_interval = 25;       // recompute A*X from scratch this often
};

struct LobpcgResult {
  Eigen::VectorXd eigenvalues;   // ascending, block_size entries
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  Eigen::VectorXd residuals;     // ||A x_i - theta_i x_i||, from a fresh product
  int iterations = 0;
};

namespace detail {

// Orthonormalizes the columns of q against nothing but each other, carrying
// aq = A q along. Columns that are numerically dependent are dropped.
inline void orthonormalize_with_image(Eigen::MatrixXd& q, Eigen::MatrixXd& aq) {
  if (q.cols() == 0) return;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double nrm = q.col(j).norm();
    if (nrm > 0.0) {
      q.col(j) /= nrm;
      aq.col(j) /= nrm;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(q);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) {
    q.resize(q.rows(), 0);
    aq.resize(aq.rows(), 0);
    return;
  }
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(rank, rank).template triangularView<Eigen::Upper>();
  const auto& perm = qr.colsPermutation();
  Eigen::MatrixXd q_perm = (q * perm).leftCols(rank);
  Eigen::MatrixXd aq_perm = (aq * perm).leftCols(rank);
  // X R^{-1} via a right triangular solve: solve R^T Y^T = X^T.
  const auto rt = r.transpose().triangularView<Eigen::Lower>();
  q = rt.solve(q_perm.transpose()).transpose();
  aq = rt.solve(aq_perm.transpose()).transpose();
}

inline void project_out(const Eigen::MatrixXd& x, const Eigen::MatrixXd& ax, Eigen::MatrixXd& q,
                        Eigen::MatrixXd* aq) {
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::MatrixXd coeff = x.transpose() * q;
    q.noalias() -= x * coeff;
    if (aq) aq->noalias() -= ax * coeff;
  }
}

}  // namespace detail

/// Locally optimal block preconditioned conjugate gradient for the smallest
/// eigenpairs of a symmetric operator.
///
/// Op must provide `Eigen::Index rows() const`, `void apply(const MatrixXd&, MatrixXd&) const`
/// (Y = A X, column by column) and `const VectorXd& diagonal() const`. The
/// preconditioner is diag(1 / (|a_ii - theta| + 1)).
template <typename Op>
LobpcgResult lobpcg_smallest(const Op& op, const Eigen::MatrixXd& initial, const LobpcgOptions& opts = {}) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Eigen::Index n = op.rows();
  const Eigen::Index k = initial.cols();
  if (initial.rows() != n || k < 1 || 3 * k > n)
    throw Error(ErrorKind::InvalidArgument, "block size must satisfy 1 <= k <= n/3");

  const VectorXd& diag = op.diagonal();
  MatrixXd x = Eigen::HouseholderQR<MatrixXd>(initial).householderQ() * MatrixXd::Identity(n, k);
  MatrixXd ax(n, k);
  op.apply(x, ax);

  VectorXd theta(k);
  auto rayleigh_ritz = [&](MatrixXd& basis, MatrixXd& image) {
    MatrixXd h = basis.transpose() * image;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    const MatrixXd c = es.eigenvectors().leftCols(k);
    theta = es.eigenvalues().head(k);
    return c;
  };
  {
    const MatrixXd c = rayleigh_ritz(x, ax);
    x = (x * c).eval();
    ax = (ax * c).eval();
  }

  MatrixXd p(n, 0), ap(n, 0);
  std::deque<double> history;
  double best_residual = std::numeric_limits<double>::infinity();
  int it = 0;

  auto residual_norms = [&](const MatrixXd& xx, const MatrixXd& axx, const VectorXd& th) {
    VectorXd out(k);
    for (Eigen::Index j = 0; j < k; ++j) out[j] = (axx.col(j) - th[j] * xx.col(j)).norm();
    return out;
  };

  for (it = 1; it <= opts.max_iterations; ++it) {
    if (it % opts.refresh_interval == 0) {
      x = Eigen::HouseholderQR<MatrixXd>(x).householderQ() * MatrixXd::Identity(n, k);
      op.apply(x, ax);
      const MatrixXd c = rayleigh_ritz(x, ax);
      x = (x * c).eval();
      ax = (ax * c).eval();
    }

    MatrixXd r = ax - x * theta.asDiagonal();
    const double res0 = r.col(0).norm();
    best_residual = std::min(best_residual, res0);

    history.push_back(theta[0]);
    if (static_cast<int>(history.size()) > opts.stall_window + 1) history.pop_front();
    const bool stalled = static_cast<int>(history.size()) == opts.stall_window + 1 &&
                         std::abs(history.back() - history.front()) <=
                             opts.stall_tolerance * std::max(std::abs(history.back()), 1e-300);

    if (res0 <= opts.residual_target && (stalled || res0 <= 0.01 * opts.residual_target)) {
      // Confirm with a fresh product before accepting.
      MatrixXd fresh(n, k);
      op.apply(x, fresh);
      for (Eigen::Index j = 0; j < k; ++j) theta[j] = x.col(j).dot(fresh.col(j));
      const VectorXd res = residual_norms(x, fresh, theta);
      if (res[0] <= opts.residual_target) {
        return {theta, x, res, it};
      }
      ax = fresh;
      r = ax - x * theta.asDiagonal();
    }

    MatrixXd w(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
      w.col(j) = r.col(j).array() / ((diag.array() - theta[j]).abs() + 1.0);
    detail::project_out(x, ax, w, nullptr);
    MatrixXd aw(n, w.cols());
    op.apply(w, aw);

    if (p.cols() > 0) detail::project_out(x, ax, p, &ap);
    MatrixXd q(n, w.cols() + p.cols()), aq(n, w.cols() + p.cols());
    q << w, p;
    aq << aw, ap;
    detail::orthonormalize_with_image(q, aq);

    MatrixXd v(n, k + q.cols()), av(n, k + q.cols());
    v << x, q;
    av << ax, aq;
    const MatrixXd c = rayleigh_ritz(v, av);

    p = q * c.bottomRows(q.cols());
    ap = aq * c.bottomRows(q.cols());
    x = v * c;
    ax = av * c;
  }

  MatrixXd fresh(n, k);
  op.apply(x, fresh);
  for (Eigen::Index j = 0; j < k; ++j) theta[j] = x.col(j).dot(fresh.col(j));
  const VectorXd res = residual_norms(x, fresh, theta);
  throw ConvergenceFailure("LOBPCG did not reach the residual target", theta[0], x.col(0), res[0],
                           opts.max_iterations);
}

}  // namespace ringflow
