#pragma once

#include <algorithm>
#include <string>

#include "glab/errors.hpp"
#include "glab/linalg/types.hpp"

namespace glab {

template <typename Derived>
typename Derived::RealScalar max_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

// Largest |m(i,j) - m(j,i)|.
template <typename Derived>
typename Derived::RealScalar symmetry_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_norm(m - m.transpose());
}

// Largest |m(i,j) + m(j,i)|.
template <typename Derived>
typename Derived::RealScalar antisymmetry_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_norm(m + m.transpose());
}

// ||Q^T Q - I||_max.
template <typename Derived>
typename Derived::RealScalar orthogonality_defect(const Eigen::MatrixBase<Derived>& q) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> gram = q.transpose() * q;
  gram.diagonal().array() -= Scalar(1);
  return max_norm(gram);
}

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + ": expected a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

// Symmetry tolerance scales with the entries once they exceed order one.
template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* what, double tol = 1e-12) {
  const double scale = std::max<double>(1.0, max_norm(m));
  if (symmetry_defect(m) > tol * scale) {
    throw SymmetryError(std::string(what) + ": matrix is not symmetric");
  }
}

template <typename Derived>
void require_antisymmetric(const Eigen::MatrixBase<Derived>& m, const char* what,
                           double tol = 1e-12) {
  const double scale = std::max<double>(1.0, max_norm(m));
  if (antisymmetry_defect(m) > tol * scale) {
    throw SymmetryError(std::string(what) + ": matrix is not antisymmetric");
  }
}

}  // namespace detail
}  // namespace glab
