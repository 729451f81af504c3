#pragma once

#include "glab/linalg/norms.hpp"
#include "glab/linalg/tridiagonal.hpp"
#include "glab/linalg/types.hpp"

namespace glab {

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric
/// matrix; column k of `eigenvectors` belongs to `eigenvalues(k)`.
template <typename Scalar>
struct Spectrum {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;

  Index dim() const { return eigenvalues.size(); }
  bool has_vectors() const { return eigenvectors.size() > 0; }
};

enum class EigenvectorMethod {
  Auto,              // QL accumulation for small matrices, inverse iteration above
  QlAccumulation,    // rotations accumulated into Q, O(n^3) with a large constant
  InverseIteration,  // tridiagonal inverse iteration + blocked back-transform
};

struct EigenOptions {
  bool vectors = true;
  EigenvectorMethod method = EigenvectorMethod::Auto;
  Index auto_threshold = 512;
  InverseIterationOptions inverse_iteration{};
};

/// Full symmetric eigendecomposition: Householder tridiagonalization followed
/// by implicit QL. Throws SymmetryError when |h - h^T| exceeds 1e-12 (scaled
/// by max(1, ||h||_max)).
template <typename Derived>
Spectrum<typename Derived::Scalar> symmetric_eigen(const Eigen::MatrixBase<Derived>& h,
                                                   const EigenOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(h, "symmetric_eigen");
  detail::require_finite(h, "symmetric_eigen");
  detail::require_symmetric(h, "symmetric_eigen");

  const Index n = h.rows();
  Spectrum<Scalar> out;
  auto reduced = householder_tridiagonalize<Scalar>(h.eval());
  if (!options.vectors) {
    out.eigenvalues = tridiagonal_eigenvalues(reduced.tridiagonal);
    return out;
  }

  EigenvectorMethod method = options.method;
  if (method == EigenvectorMethod::Auto) {
    method = n <= options.auto_threshold ? EigenvectorMethod::QlAccumulation
                                         : EigenvectorMethod::InverseIteration;
  }
  if (method == EigenvectorMethod::QlAccumulation) {
    out.eigenvectors = reduced.q();
    out.eigenvalues = tridiagonal_ql_eigen(reduced.tridiagonal, out.eigenvectors);
  } else {
    out.eigenvalues = tridiagonal_inverse_iteration(reduced.tridiagonal, out.eigenvectors,
                                                    options.inverse_iteration);
    reduced.apply_q(out.eigenvectors);
  }
  return out;
}

template <typename Derived>
VectorX<typename Derived::Scalar> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& h) {
  EigenOptions options;
  options.vectors = false;
  return symmetric_eigen(h, options).eigenvalues;
}

// ||Q diag(lambda) Q^T - h||_max.
template <typename Scalar, typename Derived>
Scalar reconstruction_defect(const Spectrum<Scalar>& s, const Eigen::MatrixBase<Derived>& h) {
  const auto& q = s.eigenvectors;
  MatrixX<Scalar> rebuilt = q * s.eigenvalues.asDiagonal() * q.transpose();
  return max_norm(rebuilt - h);
}

}  // namespace glab
