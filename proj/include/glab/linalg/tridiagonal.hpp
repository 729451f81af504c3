#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "glab/errors.hpp"
#include "glab/linalg/types.hpp"

namespace glab {

// Symmetric tridiagonal matrix: `diag` has n entries, `offdiag` has n - 1.
template <typename Scalar>
struct Tridiagonal {
  VectorX<Scalar> diag;
  VectorX<Scalar> offdiag;

  Index dim() const { return diag.size(); }

  MatrixX<Scalar> to_dense() const {
    const Index n = dim();
    MatrixX<Scalar> t = MatrixX<Scalar>::Zero(n, n);
    t.diagonal() = diag;
    if (n > 1) {
      t.diagonal(1) = offdiag;
      t.diagonal(-1) = offdiag;
    }
    return t;
  }

  // Max absolute row sum.
  Scalar one_norm() const {
    const Index n = dim();
    Scalar best = 0;
    for (Index i = 0; i < n; ++i) {
      Scalar row = std::abs(diag(i));
      if (i > 0) row += std::abs(offdiag(i - 1));
      if (i + 1 < n) row += std::abs(offdiag(i));
      best = std::max(best, row);
    }
    return best;
  }
};

/// Result of reducing a symmetric matrix to tridiagonal form, A = Q T Q^T.
///
/// Q = H_0 H_1 ... H_{n-2} with H_k = I - tau_k v_k v_k^T. Reflector k acts
/// on rows k+1..n-1; v_k(k+1) = 1 is implicit and the remaining entries are
/// stored below the subdiagonal of `reflectors`, column k.
template <typename Scalar>
struct HouseholderTridiagonal {
  Tridiagonal<Scalar> tridiagonal;
  MatrixX<Scalar> reflectors;
  VectorX<Scalar> taus;

  // z <- Q z, applied in blocks of reflectors so the work is matrix-matrix.
  void apply_q(MatrixX<Scalar>& z, Index block = 48) const {
    const Index n = reflectors.rows();
    const Index count = taus.size();
    for (Index end = count; end > 0; end -= block) {
      const Index start = std::max<Index>(0, end - block);
      const Index width = end - start;
      const Index rows = n - start - 1;
      MatrixX<Scalar> v = MatrixX<Scalar>::Zero(rows, width);
      for (Index j = 0; j < width; ++j) {
        const Index k = start + j;
        v(j, j) = Scalar(1);
        const Index tail = n - k - 2;
        if (tail > 0) v.col(j).segment(j + 1, tail) = reflectors.col(k).tail(tail);
      }
      // Forward accumulation: H_start ... H_{end-1} = I - V T V^T.
      MatrixX<Scalar> t = MatrixX<Scalar>::Zero(width, width);
      for (Index j = 0; j < width; ++j) {
        const Scalar tau = taus(start + j);
        t(j, j) = tau;
        if (j > 0 && tau != Scalar(0)) {
          VectorX<Scalar> proj = v.leftCols(j).transpose() * v.col(j);
          proj = t.topLeftCorner(j, j).template triangularView<Eigen::Upper>() * proj;
          t.col(j).head(j) = -tau * proj;
        }
      }
      auto target = z.bottomRows(rows);
      MatrixX<Scalar> w = v.transpose() * target;
      w = t.template triangularView<Eigen::Upper>() * w;
      target.noalias() -= v * w;
    }
  }

  MatrixX<Scalar> q() const {
    const Index n = reflectors.rows();
    MatrixX<Scalar> z = MatrixX<Scalar>::Identity(n, n);
    apply_q(z);
    return z;
  }
};

/// Householder reduction of a symmetric matrix to tridiagonal form.
///
/// Only the lower triangle of `a` is referenced. Reflectors are generated in
/// panels of `block` columns; within a panel the trailing matrix is kept as
/// A - V W^T - W V^T and the update is applied once per panel.
template <typename Scalar>
HouseholderTridiagonal<Scalar> householder_tridiagonalize(MatrixX<Scalar> a, Index block = 32) {
  const Index n = a.rows();
  HouseholderTridiagonal<Scalar> out;
  out.taus = VectorX<Scalar>::Zero(std::max<Index>(n - 1, 0));
  out.tridiagonal.offdiag = VectorX<Scalar>::Zero(std::max<Index>(n - 1, 0));
  MatrixX<Scalar> vpanel, wpanel;
  VectorX<Scalar> tmp;

  for (Index k0 = 0; k0 + 1 < n; k0 += block) {
    const Index m = n - k0;
    const Index nb = std::min(block, n - 1 - k0);
    vpanel.setZero(m, nb);
    wpanel.setZero(m, nb);

    for (Index i = 0; i < nb; ++i) {
      const Index k = k0 + i;
      if (i > 0) {
        auto column = a.col(k).tail(m - i);
        column.noalias() -= vpanel.block(i, 0, m - i, i) * wpanel.row(i).head(i).transpose();
        column.noalias() -= wpanel.block(i, 0, m - i, i) * vpanel.row(i).head(i).transpose();
      }
      const Index len = m - i - 1;
      auto x = a.col(k).tail(len);
      const Scalar head = x(0);
      const Scalar tail_sq = len > 1 ? x.tail(len - 1).squaredNorm() : Scalar(0);
      if (tail_sq == Scalar(0)) {
        out.tridiagonal.offdiag(k) = head;
        continue;
      }
      const Scalar norm = std::sqrt(head * head + tail_sq);
      const Scalar beta = head >= Scalar(0) ? -norm : norm;
      const Scalar tau = (beta - head) / beta;
      x.tail(len - 1) /= (head - beta);
      x(0) = Scalar(1);
      out.taus(k) = tau;
      out.tridiagonal.offdiag(k) = beta;

      auto v = vpanel.col(i).tail(len);
      auto w = wpanel.col(i).tail(len);
      v = x;
      w.noalias() = a.bottomRightCorner(len, len).template selfadjointView<Eigen::Lower>() * v;
      if (i > 0) {
        auto vprev = vpanel.block(i + 1, 0, len, i);
        auto wprev = wpanel.block(i + 1, 0, len, i);
        tmp.noalias() = wprev.transpose() * v;
        w.noalias() -= vprev * tmp;
        tmp.noalias() = vprev.transpose() * v;
        w.noalias() -= wprev * tmp;
      }
      w *= tau;
      w += (Scalar(-0.5) * tau * w.dot(v)) * v;
      x(0) = beta;
    }

    const Index rest = m - nb;
    if (rest > 0) {
      auto a22 = a.bottomRightCorner(rest, rest);
      auto v2 = vpanel.bottomRows(rest);
      auto w2 = wpanel.bottomRows(rest);
      a22.template triangularView<Eigen::Lower>() -= v2 * w2.transpose();
      a22.template triangularView<Eigen::Lower>() -= w2 * v2.transpose();
    }
  }
  out.tridiagonal.diag = a.diagonal();
  out.reflectors = std::move(a);
  return out;
}

namespace detail {

// Implicit QL sweeps with Wilkinson shift on d (diagonal) and e (e(i) couples
// i and i+1, e(n-1) unused). When `z` is non-null the plane rotations are
// accumulated into its columns. Eigenvalues are left unsorted in d.
template <typename Scalar>
void tridiagonal_ql(VectorX<Scalar>& d, VectorX<Scalar>& e, MatrixX<Scalar>* z) {
  const Index n = d.size();
  constexpr int kMaxSweeps = 60;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  if (n <= 1) return;

  for (Index l = 0; l < n; ++l) {
    int sweeps = 0;
    Index m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const Scalar dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > kMaxSweeps) throw NumericalError("tridiagonal QL failed to converge");

      Scalar g = (d(l + 1) - d(l)) / (Scalar(2) * e(l));
      Scalar r = std::hypot(g, Scalar(1));
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      Scalar s = 1, c = 1, p = 0;
      bool underflow = false;
      for (Index i = m - 1; i >= l; --i) {
        const Scalar f = s * e(i);
        const Scalar b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == Scalar(0)) {
          d(i + 1) -= p;
          e(m) = 0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + Scalar(2) * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        if (z != nullptr) {
          auto zi = z->col(i);
          auto zj = z->col(i + 1);
          for (Index k = 0; k < z->rows(); ++k) {
            const Scalar hold = zj(k);
            zj(k) = s * zi(k) + c * hold;
            zi(k) = c * zi(k) - s * hold;
          }
        }
      }
      if (underflow) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0;
    } while (m != l);
  }
}

// LU factorization with partial pivoting of (T - lambda I) for an unreduced
// tridiagonal block, followed by solves. Mirrors the classic inverse
// iteration kernel: U has diagonal `a`, first superdiagonal `b`, second
// superdiagonal `d2`; `mult` holds the multipliers and `swapped` the pivots.
template <typename Scalar>
class ShiftedTridiagonalLu {
 public:
  ShiftedTridiagonalLu(const VectorX<Scalar>& diag, const VectorX<Scalar>& off, Scalar lambda,
                       Scalar tiny)
      : n_(diag.size()), a_(diag.array() - lambda), b_(n_), mult_(n_), d2_(n_), tiny_(tiny) {
    swapped_.assign(static_cast<std::size_t>(n_), 0);
    b_.setZero();
    mult_.setZero();
    d2_.setZero();
    if (n_ > 1) b_.head(n_ - 1) = off;
    for (Index k = 0; k + 1 < n_; ++k) {
      const Scalar sub = off(k);
      if (std::abs(a_(k)) >= std::abs(sub)) {
        if (a_(k) == Scalar(0)) {
          mult_(k) = 0;  // zero column: sub is zero too
        } else {
          mult_(k) = sub / a_(k);
          a_(k + 1) -= mult_(k) * b_(k);
        }
      } else {
        const Scalar m = a_(k) / sub;
        a_(k) = sub;
        const Scalar hold = a_(k + 1);
        a_(k + 1) = b_(k) - m * hold;
        if (k + 2 < n_) {
          d2_(k) = b_(k + 1);
          b_(k + 1) = -m * d2_(k);
        }
        b_(k) = hold;
        mult_(k) = m;
        swapped_[static_cast<std::size_t>(k)] = 1;
      }
    }
  }

  Scalar last_pivot() const { return a_(n_ - 1); }

  // y <- (T - lambda I)^{-1} y, with tiny pivots perturbed to +-tiny.
  void solve(VectorX<Scalar>& y) const {
    for (Index k = 0; k + 1 < n_; ++k) {
      if (swapped_[static_cast<std::size_t>(k)] == 0) {
        y(k + 1) -= mult_(k) * y(k);
      } else {
        const Scalar hold = y(k);
        y(k) = y(k + 1);
        y(k + 1) = hold - mult_(k) * y(k);
      }
    }
    for (Index k = n_ - 1; k >= 0; --k) {
      Scalar value = y(k);
      if (k + 1 < n_) value -= b_(k) * y(k + 1);
      if (k + 2 < n_) value -= d2_(k) * y(k + 2);
      Scalar pivot = a_(k);
      if (std::abs(pivot) < tiny_) pivot = pivot < Scalar(0) ? -tiny_ : tiny_;
      y(k) = value / pivot;
    }
  }

 private:
  Index n_;
  VectorX<Scalar> a_, b_, mult_, d2_;
  std::vector<char> swapped_;
  Scalar tiny_;
};

// Splits [0, n) into unreduced blocks at negligible off-diagonal entries.
template <typename Scalar>
std::vector<std::pair<Index, Index>> unreduced_blocks(const Tridiagonal<Scalar>& t) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  std::vector<std::pair<Index, Index>> blocks;
  const Index n = t.dim();
  Index begin = 0;
  for (Index i = 0; i + 1 < n; ++i) {
    const Scalar scale = std::abs(t.diag(i)) + std::abs(t.diag(i + 1));
    if (std::abs(t.offdiag(i)) <= eps * scale) {
      blocks.emplace_back(begin, i + 1);
      begin = i + 1;
    }
  }
  blocks.emplace_back(begin, n);
  return blocks;
}

}  // namespace detail

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
template <typename Scalar>
VectorX<Scalar> tridiagonal_eigenvalues(const Tridiagonal<Scalar>& t) {
  const Index n = t.dim();
  VectorX<Scalar> d = t.diag;
  VectorX<Scalar> e = VectorX<Scalar>::Zero(n);
  if (n > 1) e.head(n - 1) = t.offdiag;
  detail::tridiagonal_ql<Scalar>(d, e, nullptr);
  std::sort(d.data(), d.data() + n);
  return d;
}

/// Full eigendecomposition of a tridiagonal matrix by implicit QL with the
/// rotations accumulated into `z` (pass the identity to get T's own vectors,
/// or Q from a Householder reduction to get the original matrix's).
/// Eigenpairs are returned sorted ascending.
template <typename Scalar>
VectorX<Scalar> tridiagonal_ql_eigen(const Tridiagonal<Scalar>& t, MatrixX<Scalar>& z) {
  const Index n = t.dim();
  VectorX<Scalar> d = t.diag;
  VectorX<Scalar> e = VectorX<Scalar>::Zero(n);
  if (n > 1) e.head(n - 1) = t.offdiag;
  detail::tridiagonal_ql<Scalar>(d, e, &z);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return d(i) < d(j); });
  VectorX<Scalar> sorted(n);
  MatrixX<Scalar> vectors(z.rows(), n);
  for (Index k = 0; k < n; ++k) {
    sorted(k) = d(order[static_cast<std::size_t>(k)]);
    vectors.col(k) = z.col(order[static_cast<std::size_t>(k)]);
  }
  z = std::move(vectors);
  return sorted;
}

struct InverseIterationOptions {
  // Eigenvalues closer than this (relative to ||T||_1) are treated as a
  // cluster and their vectors are reorthogonalized against each other.
  double cluster_tolerance = 1e-4;
  int max_iterations = 8;
  int extra_iterations = 2;
};

/// Eigenvectors of a symmetric tridiagonal matrix by inverse iteration.
///
/// Eigenvalues are computed per unreduced block by QL, then each vector is
/// obtained from a few solves with T - lambda I. Returns the ascending
/// eigenvalues and writes the vectors (columns) into `z`.
template <typename Scalar>
VectorX<Scalar> tridiagonal_inverse_iteration(const Tridiagonal<Scalar>& t, MatrixX<Scalar>& z,
                                              InverseIterationOptions options = {}) {
  const Index n = t.dim();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  z = MatrixX<Scalar>::Zero(n, n);
  VectorX<Scalar> values(n);

  // Fixed-seed start vectors keep the result reproducible.
  std::uint64_t lcg = 0x2545f4914f6cdd1dULL;
  auto next_start = [&lcg]() {
    lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<Scalar>(static_cast<double>(lcg >> 11) * 0x1.0p-53 * 2.0 - 1.0);
  };

  for (const auto& [begin, end] : detail::unreduced_blocks(t)) {
    const Index size = end - begin;
    if (size == 1) {
      values(begin) = t.diag(begin);
      z(begin, begin) = 1;
      continue;
    }
    Tridiagonal<Scalar> block{t.diag.segment(begin, size), t.offdiag.segment(begin, size - 1)};
    const VectorX<Scalar> lambdas = tridiagonal_eigenvalues(block);
    const Scalar norm = block.one_norm();
    const Scalar cluster_tol = static_cast<Scalar>(options.cluster_tolerance) * norm;
    const Scalar stop = std::sqrt(Scalar(0.1) / static_cast<Scalar>(size));
    const Scalar tiny = eps * std::max(norm, std::numeric_limits<Scalar>::min());

    Index cluster_begin = 0;
    Scalar previous = 0;
    VectorX<Scalar> x(size);
    for (Index j = 0; j < size; ++j) {
      Scalar lambda = lambdas(j);
      if (j > 0) {
        const Scalar min_sep = Scalar(10) * eps * std::abs(lambda);
        if (lambda - previous < min_sep) lambda = previous + min_sep;
        if (lambda - previous > cluster_tol) cluster_begin = j;
      }
      previous = lambda;

      const detail::ShiftedTridiagonalLu<Scalar> lu(block.diag, block.offdiag, lambda, tiny);
      for (Index i = 0; i < size; ++i) x(i) = next_start();

      int checks = 0;
      bool converged = false;
      for (int it = 0; it < options.max_iterations; ++it) {
        Index imax;
        x.cwiseAbs().maxCoeff(&imax);
        const Scalar scale = static_cast<Scalar>(size) * norm *
                             std::max(eps, std::abs(lu.last_pivot())) / std::abs(x(imax));
        x *= scale;
        lu.solve(x);
        for (Index i = cluster_begin; i < j; ++i) {
          auto zi = z.col(begin + i).segment(begin, size);
          x -= zi.dot(x) * zi;
        }
        x.cwiseAbs().maxCoeff(&imax);
        if (std::abs(x(imax)) < stop) continue;
        if (++checks > options.extra_iterations) {
          converged = true;
          break;
        }
      }
      if (!converged) throw NumericalError("inverse iteration did not converge");
      Index imax;
      x.cwiseAbs().maxCoeff(&imax);
      Scalar unit = Scalar(1) / x.norm();
      if (x(imax) < Scalar(0)) unit = -unit;
      z.col(begin + j).segment(begin, size) = x * unit;
      values(begin + j) = lambdas(j);
    }
  }

  // Blocks are independent; merge them into one ascending order.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return values(i) < values(j); });
  if (!std::is_sorted(order.begin(), order.end())) {
    VectorX<Scalar> sorted(n);
    MatrixX<Scalar> vectors(n, n);
    for (Index k = 0; k < n; ++k) {
      sorted(k) = values(order[static_cast<std::size_t>(k)]);
      vectors.col(k) = z.col(order[static_cast<std::size_t>(k)]);
    }
    values = std::move(sorted);
    z = std::move(vectors);
  }
  return values;
}

}  // namespace glab
