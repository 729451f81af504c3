#include "glab/rotation.hpp"

#include <cmath>

#include "glab/resonance.hpp"

namespace glab {
namespace {

template <typename Keep>
double offdiag_norm_if(const Matrix& h, Keep keep) {
  double best = 0.0;
  for (Index j = 0; j < h.cols(); ++j) {
    for (Index i = 0; i < h.rows(); ++i) {
      if (i != j && keep(std::abs(h(i, i) - h(j, j)))) best = std::max(best, std::abs(h(i, j)));
    }
  }
  return best;
}

}  // namespace

SplitHamiltonian split_hamiltonian(const Matrix& h, double epsilon) {
  detail::require_square(h, "split_hamiltonian");
  detail::require_symmetric(h, "split_hamiltonian");
  if (!(epsilon > 0.0)) throw InvalidArgument("split_hamiltonian: cutoff must be positive");

  const Index n = h.rows();
  SplitHamiltonian split;
  split.epsilon = epsilon;
  split.h0 = Matrix::Zero(n, n);
  split.h0.diagonal() = h.diagonal();
  split.j_res = Matrix::Zero(n, n);
  split.j_per = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j || h(i, j) == 0.0) continue;
      if (std::abs(h(i, i) - h(j, j)) < epsilon) {
        split.j_res(i, j) = h(i, j);
      } else {
        split.j_per(i, j) = h(i, j);
      }
    }
  }
  return split;
}

Matrix build_generator(const SplitHamiltonian& split) {
  const Index n = split.h0.rows();
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double element = split.j_per(i, j);
      if (element == 0.0) continue;
      const double gap = split.h0(i, i) - split.h0(j, j);
      if (gap == 0.0) throw NumericalError("build_generator: perturbative element with zero gap");
      a(i, j) = element / gap;
    }
  }
  return a;
}

Matrix rotate(const Matrix& h, const Matrix& a) {
  detail::require_square(h, "rotate");
  if (a.rows() != h.rows() || a.cols() != h.cols()) {
    throw InvalidArgument("rotate: generator and Hamiltonian dimensions differ");
  }
  const Matrix r = expm_skew(a);
  Matrix out = r * h * r.transpose();
  // Conjugation of a symmetric matrix is symmetric; drop the rounding skew.
  out = (0.5 * (out + out.transpose())).eval();
  return out;
}

double perturbative_offdiag_norm(const Matrix& h, double epsilon) {
  return offdiag_norm_if(h, [epsilon](double gap) { return gap >= epsilon; });
}

double resonant_offdiag_norm(const Matrix& h, double epsilon) {
  return offdiag_norm_if(h, [epsilon](double gap) { return gap < epsilon; });
}

SwResult sw_iterate(const Matrix& h, std::span<const double> schedule, double tolerance) {
  detail::require_square(h, "sw_iterate");
  if (schedule.empty()) throw InvalidArgument("sw_iterate: empty cutoff schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0.0)) throw InvalidArgument("sw_iterate: cutoffs must be positive");
    if (k > 0 && schedule[k] > schedule[k - 1]) {
      throw InvalidArgument("sw_iterate: cutoff schedule must be non-increasing");
    }
  }

  SwResult result;
  result.hamiltonian = h;
  result.rotation = Matrix::Identity(h.rows(), h.cols());
  const double floor = tolerance * std::max(1.0, max_norm(h));
  int increases = 0;

  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const double eps = schedule[k];
    const SplitHamiltonian split = split_hamiltonian(result.hamiltonian, eps);
    SwStep step;
    step.index = static_cast<int>(k) + 1;
    step.epsilon = eps;
    step.perturbative_before = max_norm(split.j_per);
    if (step.perturbative_before <= floor) {
      result.converged = true;
      break;
    }
    const Matrix a = build_generator(split);
    step.generator_norm = max_norm(a);
    const Matrix r = expm_skew(a);
    result.hamiltonian = r * result.hamiltonian * r.transpose();
    result.hamiltonian = (0.5 * (result.hamiltonian + result.hamiltonian.transpose())).eval();
    result.rotation = (r * result.rotation).eval();
    step.perturbative_after = perturbative_offdiag_norm(result.hamiltonian, eps);
    step.resonant_after = resonant_offdiag_norm(result.hamiltonian, eps);
    result.steps.push_back(step);

    if (step.perturbative_after > step.perturbative_before) {
      if (++increases >= 2) {
        result.failure = "perturbative off-diagonal norm increased in two consecutive steps";
        return result;
      }
    } else {
      increases = 0;
    }
    if (step.perturbative_after <= floor) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::vector<double> default_sw_schedule(double gamma, int steps) {
  if (steps < 1) throw InvalidArgument("schedule needs at least one step");
  return std::vector<double>(static_cast<std::size_t>(steps), default_resonance_cutoff(gamma));
}

}  // namespace glab
