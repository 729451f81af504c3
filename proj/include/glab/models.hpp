#pragma once

#include <cstdint>
#include <vector>

#include "glab/linalg.hpp"
#include "glab/random.hpp"

namespace glab {

// Largest Hilbert-space dimension a builder will allocate unless told otherwise.
inline constexpr Index kDefaultDimensionCap = Index{1} << 14;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// A basis state of n spins. Bit i set means sigma_i = +1.
struct SpinConfiguration {
  std::uint64_t bits = 0;
  int n_sites = 0;

  int spin(int site) const { return ((bits >> site) & 1U) != 0 ? 1 : -1; }
  SpinConfiguration flipped(int site) const {
    return {bits ^ (std::uint64_t{1} << site), n_sites};
  }
};

/// Disorder distribution of the random-field, random-transverse-field,
/// random-exchange Ising chain. Transverse fields are gamma * Gamma_i.
struct ChainParams {
  int n_sites = 0;
  double gamma = 0.0;
  Interval h_bounds{};
  Interval Gamma_bounds{};
  Interval J_bounds{};
  std::uint64_t seed = 0;

  // gamma = 0 is accepted as the classical (diagonal) limit.
  void validate() const;
};

/// One sampled chain. `J[i]` couples sites i and i+1 (n_sites - 1 bonds);
/// the couplings past either end are zero.
struct ChainRealization {
  ChainParams params;
  std::vector<double> h;
  std::vector<double> Gamma;
  std::vector<double> J;

  static ChainRealization sample(const ChainParams& params);
  static ChainRealization sample(const ChainParams& params, Rng& rng);

  int n_sites() const { return params.n_sites; }
  double transverse(int site) const { return params.gamma * Gamma[static_cast<std::size_t>(site)]; }
  // Bond between `site` and `site + 1`; zero outside the chain.
  double bond(int site) const;

  void validate() const;
};

double classical_energy(const ChainRealization& r, SpinConfiguration sigma);

/// E(sigma) - E(sigma with spin `site` flipped).
double delta_E(const ChainRealization& r, SpinConfiguration sigma, int site);

Matrix build_chain_hamiltonian(const ChainRealization& r, Index max_dim = kDefaultDimensionCap);

enum class Pauli { X, Z };

/// A Pauli matrix on one spin of bath (dim `bath_dim`) x n_spins spins.
///
/// Basis index = bath_index * 2^n_spins + spin_bits, spin `site` on bit
/// `site`. Z acts as sigma_site on a basis state; X flips the bit.
struct LocalOperator {
  Pauli kind = Pauli::X;
  int site = 0;
  int n_spins = 1;
  Index bath_dim = 1;

  Index dim() const { return bath_dim << n_spins; }
  // O * x without forming O.
  Matrix apply(const Matrix& x) const;
  Matrix to_dense() const;
};

Matrix embed_local_operator(Pauli kind, int site, int n_spins, Index bath_dim = 1);

/// Random-matrix bath of n_bath spins coupled to n_loc non-interacting
/// localized spins; added spin i (distance i = 1..n_loc, stored on bit i-1)
/// couples with strength J0 * alpha^i.
struct BathLiomParams {
  int n_bath = 0;
  int n_loc = 0;
  double J0 = 0.0;
  double alpha = 0.5;
  double W_Gf = 1.0;
  Interval h_bounds{};
  std::uint64_t seed = 0;

  Index bath_dim() const { return Index{1} << n_bath; }
  Index dim() const { return Index{1} << (n_bath + n_loc); }
  double coupling(int distance) const;
  void validate(Index max_dim = kDefaultDimensionCap) const;
};

struct BathLiomModel {
  Matrix hamiltonian;
  Matrix bath_hamiltonian;  // H_Gf, width W_Gf
  Matrix bath_coupling;     // V_Gf, Tr V^2 = bath dim
  std::vector<double> fields;     // h_i, index i-1
  std::vector<double> couplings;  // J_i, index i-1
  // S^x of each added spin; the coupling term of spin i is J_i (V_Gf x S^x_i).
  std::vector<LocalOperator> spin_flips;
};

/// H = H_Gf x I + sum_i h_i S^z_i + sum_i J_i V_Gf x S^x_i.
///
/// Draw order from `rng`: H_Gf, V_Gf, then h_1, h_2, ... so that models with
/// different n_loc built from equal seeds share their bath and leading fields.
BathLiomModel build_bath_liom_hamiltonian(const BathLiomParams& p, Rng& rng,
                                          Index max_dim = kDefaultDimensionCap);

}  // namespace glab
