#include "glab/models.hpp"

#include <cmath>
#include <string>

namespace glab {
namespace {

void check_interval(const Interval& b, const char* name) {
  if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
    throw InvalidArgument(std::string(name) + ": bounds must be finite with lo < hi");
  }
}

void check_capacity(Index dim, Index max_dim) {
  if (dim > max_dim) {
    throw CapacityError("Hilbert-space dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(max_dim));
  }
}

}  // namespace

void ChainParams::validate() const {
  if (n_sites < 2) throw InvalidArgument("chain needs at least 2 sites");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be >= 0");
  check_interval(h_bounds, "h_bounds");
  check_interval(Gamma_bounds, "Gamma_bounds");
  check_interval(J_bounds, "J_bounds");
}

ChainRealization ChainRealization::sample(const ChainParams& params) {
  Rng rng(params.seed);
  return sample(params, rng);
}

ChainRealization ChainRealization::sample(const ChainParams& params, Rng& rng) {
  params.validate();
  ChainRealization r;
  r.params = params;
  const auto n = static_cast<std::size_t>(params.n_sites);
  r.h.resize(n);
  r.Gamma.resize(n);
  r.J.resize(n - 1);
  for (auto& x : r.h) x = rng.uniform(params.h_bounds.lo, params.h_bounds.hi);
  for (auto& x : r.Gamma) x = rng.uniform(params.Gamma_bounds.lo, params.Gamma_bounds.hi);
  for (auto& x : r.J) x = rng.uniform(params.J_bounds.lo, params.J_bounds.hi);
  return r;
}

double ChainRealization::bond(int site) const {
  if (site < 0 || site + 1 >= n_sites()) return 0.0;
  return J[static_cast<std::size_t>(site)];
}

void ChainRealization::validate() const {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n_sites);
  if (h.size() != n || Gamma.size() != n || J.size() != n - 1) {
    throw InvalidArgument("chain realization: array lengths do not match n_sites");
  }
}

double classical_energy(const ChainRealization& r, SpinConfiguration sigma) {
  double e = 0.0;
  const int n = r.n_sites();
  for (int i = 0; i < n; ++i) {
    e += r.h[static_cast<std::size_t>(i)] * sigma.spin(i);
    if (i + 1 < n) e += r.bond(i) * sigma.spin(i) * sigma.spin(i + 1);
  }
  return e;
}

double delta_E(const ChainRealization& r, SpinConfiguration sigma, int site) {
  const int n = r.n_sites();
  if (site < 0 || site >= n) throw InvalidArgument("delta_E: site out of range");
  const double right = site + 1 < n ? r.bond(site) * sigma.spin(site + 1) : 0.0;
  const double left = site > 0 ? r.bond(site - 1) * sigma.spin(site - 1) : 0.0;
  return 2.0 * sigma.spin(site) * (r.h[static_cast<std::size_t>(site)] + right + left);
}

Matrix build_chain_hamiltonian(const ChainRealization& r, Index max_dim) {
  r.validate();
  const int n = r.n_sites();
  if (n >= 62) throw CapacityError("chain too long for a dense Hamiltonian");
  const Index dim = Index{1} << n;
  check_capacity(dim, max_dim);

  Matrix h = Matrix::Zero(dim, dim);
  for (Index s = 0; s < dim; ++s) {
    const SpinConfiguration sigma{static_cast<std::uint64_t>(s), n};
    h(s, s) = classical_energy(r, sigma);
    for (int i = 0; i < n; ++i) {
      const double t = r.transverse(i);
      if (t != 0.0) h(static_cast<Index>(sigma.flipped(i).bits), s) = t;
    }
  }
  return h;
}

Matrix LocalOperator::apply(const Matrix& x) const {
  if (x.rows() != dim()) throw InvalidArgument("LocalOperator::apply: dimension mismatch");
  Matrix out(x.rows(), x.cols());
  const Index mask = Index{1} << site;
  if (kind == Pauli::X) {
    for (Index row = 0; row < x.rows(); ++row) out.row(row) = x.row(row ^ mask);
  } else {
    for (Index row = 0; row < x.rows(); ++row) {
      out.row(row) = (row & mask) != 0 ? x.row(row) : Matrix(-x.row(row));
    }
  }
  return out;
}

Matrix LocalOperator::to_dense() const { return apply(Matrix::Identity(dim(), dim())); }

Matrix embed_local_operator(Pauli kind, int site, int n_spins, Index bath_dim) {
  if (n_spins < 1 || site < 0 || site >= n_spins) {
    throw InvalidArgument("embed_local_operator: site out of range");
  }
  if (bath_dim < 1) throw InvalidArgument("embed_local_operator: bath dimension must be >= 1");
  return LocalOperator{kind, site, n_spins, bath_dim}.to_dense();
}

double BathLiomParams::coupling(int distance) const {
  return J0 * std::pow(alpha, static_cast<double>(distance));
}

void BathLiomParams::validate(Index max_dim) const {
  if (n_bath < 0 || n_loc < 0) throw InvalidArgument("n_bath and n_loc must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(J0 >= 0.0) || !std::isfinite(J0)) throw InvalidArgument("J0 must be >= 0");
  if (!(W_Gf > 0.0) || !std::isfinite(W_Gf)) throw InvalidArgument("W_Gf must be > 0");
  if (n_loc > 0) check_interval(h_bounds, "h_bounds");
  if (n_bath + n_loc >= 62) throw CapacityError("too many spins for a dense Hamiltonian");
  check_capacity(dim(), max_dim);
}

BathLiomModel build_bath_liom_hamiltonian(const BathLiomParams& p, Rng& rng, Index max_dim) {
  p.validate(max_dim);
  BathLiomModel model;
  const Index d = p.bath_dim();
  const Index m = Index{1} << p.n_loc;
  const Index dim = p.dim();

  model.bath_hamiltonian = sample_goe(d, p.W_Gf, rng);
  model.bath_coupling = sample_goe_unit_trace(d, rng);
  for (int i = 1; i <= p.n_loc; ++i) {
    model.fields.push_back(rng.uniform(p.h_bounds.lo, p.h_bounds.hi));
    model.couplings.push_back(p.coupling(i));
    model.spin_flips.push_back(LocalOperator{Pauli::X, i - 1, p.n_loc, d});
  }

  Matrix& h = model.hamiltonian;
  h = Matrix::Zero(dim, dim);
  const Matrix& hb = model.bath_hamiltonian;
  const Matrix& vb = model.bath_coupling;
  for (Index b = 0; b < d; ++b) {
    for (Index a = 0; a < d; ++a) {
      for (Index s = 0; s < m; ++s) {
        h(a * m + s, b * m + s) += hb(a, b);
        for (int i = 0; i < p.n_loc; ++i) {
          const Index flipped = s ^ (Index{1} << i);
          h(a * m + flipped, b * m + s) += model.couplings[static_cast<std::size_t>(i)] * vb(a, b);
        }
      }
    }
  }
  for (Index a = 0; a < d; ++a) {
    for (Index s = 0; s < m; ++s) {
      double field = 0.0;
      for (int i = 0; i < p.n_loc; ++i) {
        field += model.fields[static_cast<std::size_t>(i)] * (((s >> i) & 1) != 0 ? 1.0 : -1.0);
      }
      h(a * m + s, a * m + s) += field;
    }
  }
  return model;
}

}  // namespace glab
