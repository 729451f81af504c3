#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glab/linalg.hpp"

namespace glab {

/// H = h0 + j_res + j_per, with h0 diagonal and the off-diagonal part split
/// by whether the bridged diagonal gap is below the cutoff.
struct SplitHamiltonian {
  Matrix h0;
  Matrix j_res;
  Matrix j_per;
  double epsilon = 0.0;

  Matrix reconstruct() const { return h0 + j_res + j_per; }
};

/// Element (s, t), s != t, goes to j_res when |H_ss - H_tt| < epsilon and to
/// j_per otherwise. On the chain this reproduces the single-flip rule: the
/// gap bridged by a transverse term is exactly Delta E of the flipped site.
SplitHamiltonian split_hamiltonian(const Matrix& h, double epsilon);

/// A_st = (j_per)_st / (E_s - E_t) with E the diagonal of h0. Antisymmetric.
Matrix build_generator(const SplitHamiltonian& split);

/// e^A H e^-A, computed as R H R^T with R = expm_skew(A).
Matrix rotate(const Matrix& h, const Matrix& a);

// Largest |off-diagonal entry| whose diagonal gap is >= epsilon (or < epsilon).
double perturbative_offdiag_norm(const Matrix& h, double epsilon);
double resonant_offdiag_norm(const Matrix& h, double epsilon);

struct SwStep {
  int index = 0;
  double epsilon = 0.0;
  double perturbative_before = 0.0;  // ||j_per||_max entering the step
  double perturbative_after = 0.0;   // same cutoff, after the rotation
  double resonant_after = 0.0;
  double generator_norm = 0.0;       // ||A||_max
};

struct SwResult {
  Matrix hamiltonian;  // R H R^T
  Matrix rotation;     // accumulated R = R_k ... R_1
  std::vector<SwStep> steps;
  bool converged = false;
  std::optional<std::string> failure;
};

/// Repeats split / generator / rotate once per cutoff in `schedule`
/// (positive, non-increasing). Stops early once no perturbative element is
/// left above `tolerance` * ||H||_max. Two consecutive increases of the
/// perturbative norm end the run with `failure` set.
SwResult sw_iterate(const Matrix& h, std::span<const double> schedule, double tolerance = 1e-14);

/// `steps` copies of the default single-flip cutoff gamma^(1/20).
std::vector<double> default_sw_schedule(double gamma, int steps);

}  // namespace glab
