#include "glab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace glab {

IndexWindow mid_spectrum_window(Index dim, double fraction) {
  if (dim < 1) throw InvalidArgument("mid_spectrum_window: empty spectrum");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("mid_spectrum_window: fraction must lie in (0, 1]");
  }
  Index count = std::clamp<Index>(std::llround(fraction * static_cast<double>(dim)), 1, dim);
  Index first = std::clamp<Index>(dim / 2 - count / 2, 0, dim - count);
  return {first, count};
}

GapRatioStats gap_ratio_stats(const Vector& levels, IndexWindow window) {
  if (window.count < 3 || window.first < 0 || window.end() > levels.size()) {
    throw InvalidArgument("gap_ratio_stats: window needs at least 3 levels inside the spectrum");
  }
  GapRatioStats stats;
  double sum = 0.0;
  for (Index n = window.first; n + 2 < window.end(); ++n) {
    const double g0 = levels(n + 1) - levels(n);
    const double g1 = levels(n + 2) - levels(n + 1);
    const double hi = std::max(g0, g1);
    if (hi <= 0.0 || std::min(g0, g1) < 0.0) {
      ++stats.skipped;
      continue;
    }
    sum += std::min(g0, g1) / hi;
    ++stats.count;
  }
  stats.mean = stats.count > 0 ? sum / static_cast<double>(stats.count) : 0.0;
  return stats;
}

Matrix BathOperator::apply(const Matrix& x) const {
  const Index d = bath.rows();
  if (x.rows() != dim()) throw InvalidArgument("BathOperator::apply: dimension mismatch");
  if (spin_dim == 1) return bath * x;
  Matrix out(x.rows(), x.cols());
  // Column j viewed as a spin_dim x d matrix X_j; (B (x) I) x_j = X_j B^T.
  for (Index j = 0; j < x.cols(); ++j) {
    Eigen::Map<const Matrix> in(x.col(j).data(), spin_dim, d);
    Eigen::Map<Matrix> res(out.col(j).data(), spin_dim, d);
    res.noalias() = in * bath.transpose();
  }
  return out;
}

Matrix BathOperator::to_dense() const { return apply(Matrix::Identity(dim(), dim())); }

Matrix operator_matrix(const Matrix& op, const Spectrum<double>& spectrum) {
  if (!spectrum.has_vectors() || op.rows() != spectrum.dim() || op.cols() != spectrum.dim()) {
    throw InvalidArgument("operator_matrix: operator and spectrum dimensions differ");
  }
  const Matrix& q = spectrum.eigenvectors;
  return q.transpose() * (op * q);
}

double row_ipr(const Eigen::Ref<const Vector>& row) {
  const double weight = row.squaredNorm();
  if (!(weight > 0.0)) throw NumericalError("operator annihilates state");
  const double fourth = (row.array().square() / weight).square().sum();
  return 1.0 / fourth;
}

namespace detail {

void require_window(const Spectrum<double>& s, IndexWindow window) {
  if (!s.has_vectors()) throw InvalidArgument("spectrum carries no eigenvectors");
  if (window.count < 1 || window.first < 0 || window.end() > s.dim()) {
    throw InvalidArgument("window outside the spectrum");
  }
}

IprResult ipr_from_rows(const Matrix& rows, const Vector& image_norms_sq, IndexWindow window) {
  IprResult result;
  result.window = window;
  result.per_state.reserve(static_cast<std::size_t>(rows.rows()));
  const double scale = image_norms_sq.size() > 0 ? image_norms_sq.maxCoeff() : 0.0;
  double log_sum = 0.0;
  for (Index i = 0; i < rows.rows(); ++i) {
    const double norm_sq = image_norms_sq(i);
    if (!(scale > 0.0) || norm_sq <= 1e-24 * scale) {
      throw NumericalError("operator annihilates eigenstate " + std::to_string(window.first + i));
    }
    const Vector row = rows.row(i).transpose();
    const double value = row_ipr(row);
    result.per_state.push_back(value);
    log_sum += std::log(value);
    result.sumrule_residual =
        std::max(result.sumrule_residual, std::abs(row.squaredNorm() - norm_sq) / norm_sq);
  }
  result.mean_log = log_sum / static_cast<double>(rows.rows());
  return result;
}

}  // namespace detail

double eth_offdiag_scale(const Matrix& op, const Spectrum<double>& spectrum, IndexWindow window) {
  detail::require_window(spectrum, window);
  if (window.count < 2) throw InvalidArgument("eth_offdiag_scale: window needs two states");
  const Matrix qw = spectrum.eigenvectors.middleCols(window.first, window.count);
  const Matrix block = qw.transpose() * (op * qw);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(window.count * (window.count - 1) / 2));
  for (Index j = 0; j < block.cols(); ++j) {
    for (Index i = 0; i < j; ++i) values.push_back(std::abs(block(i, j)));
  }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace glab
