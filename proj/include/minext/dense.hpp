#pragma once

// Small dense linear algebra for the exhaustive oracles and rank tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace minext::dense {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Rank by Gaussian elimination with scaled partial pivoting. A candidate
/// pivot whose magnitude is at most rel_pivot times the largest entry of the
/// input marks its column as dependent.
template <class Scalar>
std::size_t numerical_rank(Matrix<Scalar> m, double rel_pivot = 1e-9) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  const double largest = m.cwiseAbs().maxCoeff();
  if (largest == 0.0) return 0;
  const double threshold = rel_pivot * largest;

  std::vector<double> row_scale(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    row_scale[static_cast<std::size_t>(i)] = m.row(i).cwiseAbs().maxCoeff();
  }

  Eigen::Index pivot_row = 0;
  for (Eigen::Index c = 0; c < cols && pivot_row < rows; ++c) {
    Eigen::Index best = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = pivot_row; i < rows; ++i) {
      const double s = row_scale[static_cast<std::size_t>(i)];
      if (s == 0.0) continue;
      const double ratio = std::abs(m(i, c)) / s;
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = i;
      }
    }
    if (best < 0 || std::abs(m(best, c)) <= threshold) continue;
    if (best != pivot_row) {
      m.row(best).swap(m.row(pivot_row));
      std::swap(row_scale[static_cast<std::size_t>(best)],
                row_scale[static_cast<std::size_t>(pivot_row)]);
    }
    const Scalar pivot = m(pivot_row, c);
    for (Eigen::Index i = pivot_row + 1; i < rows; ++i) {
      const Scalar f = m(i, c) / pivot;
      if (f != Scalar(0)) m.row(i).tail(cols - c) -= f * m.row(pivot_row).tail(cols - c);
    }
    ++pivot_row;
  }
  return static_cast<std::size_t>(pivot_row);
}

template <class Scalar>
struct LeastSquares {
  Vector<Scalar> x;
  double residual = 0.0;  // ||A x - b||_2
  bool full_column_rank = false;
};

/// Minimum-norm least-squares solution via column-pivoted QR.
template <class Scalar>
LeastSquares<Scalar> least_squares(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                                   double rel_rank_tol = 1e-10) {
  LeastSquares<Scalar> out;
  if (a.cols() == 0) {
    out.x = Vector<Scalar>::Zero(0);
    out.residual = b.norm();
    out.full_column_rank = true;
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(a.rows(), a.cols());
  cod.setThreshold(rel_rank_tol);
  cod.compute(a);
  out.x = cod.solve(b);
  out.residual = (a * out.x - b).norm();
  out.full_column_rank = cod.rank() == a.cols();
  return out;
}

}  // namespace minext::dense
