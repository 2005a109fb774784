#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qhi/error.hpp"

namespace qhi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest entry magnitude, ||M||_max.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

inline bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline bool is_real_entried(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j).imag() != 0.0) return false;
  return true;
}

/// True when every entry with |row - col| > 1 is exactly zero.
inline bool is_tridiagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (std::abs(i - j) > 1 && m(i, j) != Complex{}) return false;
  return true;
}

/// Throws unless `m` is a finite square matrix of dimension >= 1.
inline void require_square_finite(const ComplexMatrix& m, const char* who) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw InvalidDimension(std::string(who) + ": matrix must be square with dim >= 1");
  if (!is_finite(m)) throw NumericFailure(std::string(who) + ": matrix has non-finite entries", 0.0);
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(who) + ": dimension mismatch");
}

}  // namespace qhi
