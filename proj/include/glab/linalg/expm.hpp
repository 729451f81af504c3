#pragma once

#include <cmath>

#include "glab/linalg/norms.hpp"
#include "glab/linalg/types.hpp"

namespace glab {

/// e^a for antisymmetric a (an orthogonal matrix).
///
/// Scaling and squaring around a Taylor series: a is scaled by 2^-s so its
/// 1-norm is at most 1/2, terms are summed until the last one added has
/// max-norm below 1e-15, and the result is squared s times.
template <typename Derived>
MatrixX<typename Derived::Scalar> expm_skew(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "expm_skew");
  detail::require_finite(a, "expm_skew");
  detail::require_antisymmetric(a, "expm_skew");

  const Index n = a.rows();
  const Scalar norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > Scalar(0.5)) squarings = static_cast<int>(std::ceil(std::log2(norm1 / Scalar(0.5))));

  const MatrixX<Scalar> scaled = a / std::ldexp(Scalar(1), squarings);
  MatrixX<Scalar> result = MatrixX<Scalar>::Identity(n, n);
  MatrixX<Scalar> term = MatrixX<Scalar>::Identity(n, n);
  MatrixX<Scalar> next(n, n);
  for (int k = 1; k <= 64; ++k) {
    next.noalias() = term * scaled;
    term = next / Scalar(k);
    result += term;
    if (max_norm(term) < Scalar(1e-15)) break;
  }
  for (int s = 0; s < squarings; ++s) {
    next.noalias() = result * result;
    result.swap(next);
  }
  return result;
}

}  // namespace glab
