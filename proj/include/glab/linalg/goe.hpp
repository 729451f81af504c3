#pragma once

#include <cmath>
#include <string>

#include "glab/errors.hpp"
#include "glab/linalg/symmetric_eigen.hpp"
#include "glab/linalg/types.hpp"
#include "glab/random.hpp"

namespace glab {

/// Unnormalized GOE draw: N(0, 1) off-diagonal, N(0, 2) diagonal.
template <typename Scalar = double>
MatrixX<Scalar> sample_goe_raw(Index n, Rng& rng) {
  if (n < 1) throw InvalidArgument("sample_goe: dimension must be >= 1");
  MatrixX<Scalar> m(n, n);
  for (Index j = 0; j < n; ++j) {
    m(j, j) = static_cast<Scalar>(std::sqrt(2.0) * rng.normal());
    for (Index i = j + 1; i < n; ++i) {
      const auto x = static_cast<Scalar>(rng.normal());
      m(i, j) = x;
      m(j, i) = x;
    }
  }
  return m;
}

/// GOE draw rescaled so that the measured spectral width E_max - E_min equals
/// `target_width`.
///
/// A 1x1 matrix has zero width and cannot be rescaled; it is returned as the
/// zero matrix (a scalar bath has no internal dynamics).
template <typename Scalar = double>
MatrixX<Scalar> sample_goe(Index n, Scalar target_width, Rng& rng) {
  if (n < 1) throw InvalidArgument("sample_goe: dimension must be >= 1");
  if (!(target_width > Scalar(0)) || !std::isfinite(static_cast<double>(target_width))) {
    throw InvalidArgument("sample_goe: target width must be positive");
  }
  MatrixX<Scalar> m = sample_goe_raw<Scalar>(n, rng);
  if (n == 1) return MatrixX<Scalar>::Zero(1, 1);
  const VectorX<Scalar> levels = symmetric_eigenvalues(m);
  const Scalar width = levels(n - 1) - levels(0);
  m *= target_width / width;
  return m;
}

/// GOE draw normalized to Tr(m^2) = n.
template <typename Scalar = double>
MatrixX<Scalar> sample_goe_unit_trace(Index n, Rng& rng) {
  MatrixX<Scalar> m = sample_goe_raw<Scalar>(n, rng);
  m *= std::sqrt(static_cast<Scalar>(n) / m.squaredNorm());
  return m;
}

}  // namespace glab
