#pragma once

#include <Eigen/Dense>

#include "polyball/core.hpp"

namespace polyball {

/// Kronecker product, row-major block placement.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix identity(int n) { return Matrix::Identity(n, n); }

/// Largest singular value; zero for empty matrices.
inline double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

/// Smallest singular value of a square matrix; empty matrices count as
/// nonsingular with value +inf.
inline double smallest_singular_value(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

/// Rank cutoff: relative to the largest singular value, with an absolute
/// floor once everything is tiny.
inline double rank_tolerance(double sigma_max) {
  if (sigma_max < 1e-3) return 1e-12;
  return 1e-9 * sigma_max;
}

/// Orthonormal basis of the column space, as columns.  May have zero
/// columns; always has m.rows() rows.
inline Matrix orthonormal_range(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double tol = rank_tolerance(sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// (orthonormal) columns of onb, inside C^dim.
inline Matrix orthonormal_complement(const Matrix& onb, int dim) {
  if (onb.cols() == 0) return identity(dim);
  Eigen::HouseholderQR<Matrix> qr(onb);
  Matrix q = qr.householderQ();
  return q.rightCols(dim - onb.cols());
}

/// Orthogonal projector onto the span of the (orthonormal) columns.
inline Matrix projector(const Matrix& onb, int dim) {
  if (onb.cols() == 0) return Matrix::Zero(dim, dim);
  return onb * onb.adjoint();
}

/// Concatenate matrices side by side; all must share the row count.
inline Matrix hcat(const std::vector<Matrix>& parts, int rows) {
  int cols = 0;
  for (const auto& p : parts) cols += static_cast<int>(p.cols());
  Matrix out(rows, cols);
  int at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p;
    at += static_cast<int>(p.cols());
  }
  return out;
}

}  // namespace polyball
