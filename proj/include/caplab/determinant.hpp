#pragma once

// Exact determinants by fraction-free (Bareiss) elimination.
//
// Over an integral domain every division in the elimination is exact, so
// the result never leaves the domain.  Over a field (Rational,
// GaussianRational) the same recurrence keeps intermediate entries small.

#include <utility>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "caplab/scalar.hpp"

namespace caplab {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Scalar bareiss_determinant(DenseMatrix<Scalar> A) {
  const Eigen::Index n = A.rows();
  if (n != A.cols()) throw std::invalid_argument("bareiss_determinant: matrix is not square");
  if (n == 0) return Scalar(1);

  bool negate = false;
  Scalar prev(1);
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (is_zero(A(k, k))) {
      Eigen::Index swap_row = k + 1;
      while (swap_row < n && is_zero(A(swap_row, k))) ++swap_row;
      if (swap_row == n) return Scalar(0);
      A.row(k).swap(A.row(swap_row));
      negate = !negate;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        Scalar t = A(k, k) * A(i, j) - A(i, k) * A(k, j);
        A(i, j) = t / prev;
      }
      A(i, k) = Scalar(0);
    }
    prev = A(k, k);
  }
  Scalar det = A(n - 1, n - 1);
  return negate ? Scalar(-det) : det;
}

}  // namespace caplab
