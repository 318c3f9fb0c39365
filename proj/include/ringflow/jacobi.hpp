#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "ringflow/errors.hpp"

namespace ringflow {

template <typename Scalar>
struct JacobiResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;                // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;  // columns
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a private copy of a dense symmetric matrix.
/// Intended for cross-checking closed forms on small matrices (n <= a few
/// hundred); cost is O(n^3) per sweep.
template <typename Derived>
JacobiResult<typename Derived::Scalar> jacobi_eigensolver(const Eigen::MatrixBase<Derived>& input,
                                                          int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  using std::sqrt;

  if (input.rows() != input.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  const Eigen::Index n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::Identity(n, n);

  JacobiResult<Scalar> out;
  const Scalar scale = a.cwiseAbs().maxCoeff();
  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Scalar off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    out.sweeps = sweep;
    if (sqrt(off) <= eps * eps * scale || scale == Scalar(0)) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (abs(apq) <= eps * eps * scale) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar sign = theta >= 0 ? Scalar(1) : Scalar(-1);
        const Scalar t = sign / (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Selection sort keeps eigenvalue/eigenvector pairs together.
  out.eigenvalues = a.diagonal();
  out.eigenvectors = std::move(v);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = i;
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (out.eigenvalues[j] < out.eigenvalues[best]) best = j;
    if (best != i) {
      std::swap(out.eigenvalues[i], out.eigenvalues[best]);
      out.eigenvectors.col(i).swap(out.eigenvectors.col(best));
    }
  }
  return out;
}

}  // namespace ringflow
