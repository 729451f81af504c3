#pragma once

#include <concepts>
#include <vector>

#include "glab/linalg.hpp"

namespace glab {

/// Contiguous range [first, first + count) of eigenstate indices.
struct IndexWindow {
  Index first = 0;
  Index count = 0;

  Index end() const { return first + count; }
};

/// Central `fraction` of the index range, centred on dim / 2.
IndexWindow mid_spectrum_window(Index dim, double fraction = 0.2);

inline IndexWindow mid_spectrum_window(const Spectrum<double>& s, double fraction = 0.2) {
  return mid_spectrum_window(s.dim(), fraction);
}

struct GapRatioStats {
  double mean = 0.0;
  Index count = 0;    // ratios averaged
  Index skipped = 0;  // ratios dropped because a gap was exactly zero
};

/// Mean adjacent-gap ratio min(g_n, g_n+1) / max(g_n, g_n+1) over the levels
/// inside `window` (which must hold at least three levels).
GapRatioStats gap_ratio_stats(const Vector& ascending_levels, IndexWindow window);

/// A symmetric operator that can act on a block of column vectors.
template <typename Op>
concept SymmetricOperator = requires(const Op& op, const Matrix& x) {
  { op.apply(x) } -> std::convertible_to<Matrix>;
  { op.dim() } -> std::convertible_to<Index>;
};

struct DenseOperator {
  const Matrix& matrix;

  Index dim() const { return matrix.rows(); }
  Matrix apply(const Matrix& x) const { return matrix * x; }
};

/// bath (x) identity on the 2^n_spins spin factor; bath index is the slow one.
struct BathOperator {
  Matrix bath;
  Index spin_dim = 1;

  Index dim() const { return bath.rows() * spin_dim; }
  Matrix apply(const Matrix& x) const;
  Matrix to_dense() const;
};

/// M = Q^T O Q, the operator in the eigenbasis.
Matrix operator_matrix(const Matrix& op, const Spectrum<double>& spectrum);

/// 1 / sum_j |row_j|^4 after normalizing the row to unit 2-norm.
/// Throws NumericalError for a zero row.
double row_ipr(const Eigen::Ref<const Vector>& row);

struct IprResult {
  std::vector<double> per_state;
  double mean_log = 0.0;  // <ln IPR> over the window
  IndexWindow window{};
  // max over window rows of |sum_j M_ij^2 - ||O psi_i||^2| / ||O psi_i||^2
  double sumrule_residual = 0.0;
};

namespace detail {
IprResult ipr_from_rows(const Matrix& rows, const Vector& image_norms_sq, IndexWindow window);
void require_window(const Spectrum<double>& s, IndexWindow window);
}  // namespace detail

/// Operator IPR of every eigenstate in `window`: the rows <psi, O psi'> over
/// all psi' are formed as (O Q_w)^T Q, so only the window columns of Q are
/// acted on.
template <SymmetricOperator Op>
IprResult ipr(const Op& op, const Spectrum<double>& spectrum, IndexWindow window) {
  detail::require_window(spectrum, window);
  if (op.dim() != spectrum.dim()) throw InvalidArgument("ipr: operator dimension mismatch");
  const Matrix image = op.apply(spectrum.eigenvectors.middleCols(window.first, window.count));
  const Matrix rows = image.transpose() * spectrum.eigenvectors;
  return detail::ipr_from_rows(rows, image.colwise().squaredNorm().transpose(), window);
}

inline IprResult ipr(const Matrix& op, const Spectrum<double>& spectrum, IndexWindow window) {
  detail::require_symmetric(op, "ipr");
  return ipr(DenseOperator{op}, spectrum, window);
}

/// Median |<psi, O psi'>| over distinct pairs psi != psi' inside `window`.
double eth_offdiag_scale(const Matrix& op, const Spectrum<double>& spectrum, IndexWindow window);

}  // namespace glab
