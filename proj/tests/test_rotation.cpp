#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>

#include "glab/resonance.hpp"
#include "glab/rotation.hpp"
#include "oracles.hpp"

using namespace glab;

namespace {

// Fields in [1, 2] and bonds in [-0.25, 0.25] keep every |Delta E| >= 1, so
// no site is resonant at any cutoff gamma^(1/20) < 1.
ChainParams nonresonant(int n, double gamma) {
  ChainParams p;
  p.n_sites = n;
  p.gamma = gamma;
  p.h_bounds = {1.0, 2.0};
  p.Gamma_bounds = {0.5, 1.5};
  p.J_bounds = {-0.25, 0.25};
  p.seed = 606;
  return p;
}

Matrix two_by_two(double a, double b, double off) {
  Matrix h(2, 2);
  h << a, off, off, b;
  return h;
}

}  // namespace

TEST_CASE("split extremes and reconstruction") {
  const Matrix h = build_chain_hamiltonian(ChainRealization::sample(nonresonant(5, 0.1)));
  const SplitHamiltonian small = split_hamiltonian(h, 0.5);
  CHECK(max_norm(small.j_res) == 0.0);
  CHECK(max_norm(small.reconstruct() - h) == 0.0);
  CHECK(max_norm(small.j_per.diagonal()) == 0.0);

  const SplitHamiltonian huge = split_hamiltonian(h, 1e6);
  CHECK(max_norm(huge.j_per) == 0.0);
  CHECK(max_norm(huge.reconstruct() - h) == 0.0);
  CHECK(max_norm(huge.j_res.diagonal()) == 0.0);
  CHECK((small.j_res.array() * small.j_per.array()).abs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(split_hamiltonian(h, 0.0), InvalidArgument);
  Matrix asym = h;
  asym(0, 1) += 1.0;
  CHECK_THROWS_AS(split_hamiltonian(asym, 0.5), SymmetryError);
}

TEST_CASE("an engineered degenerate pair lands in j_res") {
  // h = (0.5, 0.5) and no bond: flipping either spin of 01 or 10 yields an
  // equal-energy partner only for the pair (01, 10), which is not a single
  // flip; add a direct coupling to make it a matrix element.
  ChainRealization r;
  r.params = nonresonant(2, 0.1);
  r.h = {0.5, 0.5};
  r.J = {0.0};
  r.Gamma = {1.0, 1.0};
  Matrix h = build_chain_hamiltonian(r);
  h(1, 2) = h(2, 1) = 0.05;
  const SplitHamiltonian split = split_hamiltonian(h, 0.1);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      const bool pair = (i == 1 && j == 2) || (i == 2 && j == 1);
      CHECK((split.j_res(i, j) != 0.0) == pair);
    }
  }
}

TEST_CASE("element-wise split equals the single-flip rule on the chain") {
  ChainParams p = nonresonant(6, 0.2);
  p.h_bounds = {-1.0, 1.0};
  p.J_bounds = {-0.5, 0.5};
  const ChainRealization r = ChainRealization::sample(p);
  const Matrix h = build_chain_hamiltonian(r);
  const double eps = 0.4;
  const SplitHamiltonian split = split_hamiltonian(h, eps);
  int resonant_elements = 0;
  for (std::uint64_t bits = 0; bits < 64; ++bits) {
    const SpinConfiguration s{bits, 6};
    for (int i = 0; i < 6; ++i) {
      const auto t = static_cast<Index>(s.flipped(i).bits);
      const bool resonant = std::abs(delta_E(r, s, i)) < eps;
      CHECK((split.j_res(t, static_cast<Index>(bits)) != 0.0) == resonant);
      CHECK((split.j_per(t, static_cast<Index>(bits)) != 0.0) == !resonant);
      resonant_elements += resonant;
    }
  }
  CHECK(resonant_elements > 0);  // the comparison was not vacuous
}

TEST_CASE("generator by hand and its invariants") {
  const SplitHamiltonian s = split_hamiltonian(two_by_two(1.0, -0.5, 0.01), 0.1);
  const Matrix a = build_generator(s);
  CHECK(a(0, 1) == doctest::Approx(0.01 / 1.5));
  CHECK(a(1, 0) == doctest::Approx(-0.01 / 1.5));
  CHECK(a(0, 0) == 0.0);

  CHECK(max_norm(build_generator(split_hamiltonian(two_by_two(1.0, 1.05, 0.01), 0.1))) == 0.0);

  ChainParams p = nonresonant(6, 0.3);
  p.h_bounds = {-1.0, 1.0};
  const Matrix h = build_chain_hamiltonian(ChainRealization::sample(p));
  const double eps = 0.3;
  const SplitHamiltonian split = split_hamiltonian(h, eps);
  const Matrix gen = build_generator(split);
  CHECK(antisymmetry_defect(gen) == 0.0);
  CHECK(max_norm(gen) <= max_norm(split.j_per) / eps);
  for (Index i = 0; i < h.rows(); ++i) {
    for (Index j = 0; j < h.cols(); ++j) {
      if (split.j_res(i, j) != 0.0) CHECK(gen(i, j) == 0.0);
    }
  }
}

TEST_CASE("rotation preserves the spectrum") {
  CHECK(max_norm(rotate(Matrix::Identity(3, 3) * 2.0, Matrix::Zero(3, 3)) - 2.0 * Matrix::Identity(3, 3)) == 0.0);
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 4 + 6 * trial;
    const Matrix h = oracle::random_symmetric(n, gen);
    const Matrix a = oracle::random_antisymmetric(n, gen, 0.05 * (trial + 1));
    const Matrix rotated = rotate(h, a);
    CHECK(symmetry_defect(rotated) == 0.0);
    CHECK(max_norm(oracle::eigenvalues(rotated) - oracle::eigenvalues(h)) <= 1e-9 * max_norm(h));
    const Matrix r = oracle::expm_antisymmetric(a);
    CHECK(max_norm(rotated - r * h * r.transpose()) <= 1e-11 * max_norm(h));
  }
  CHECK_THROWS_AS(rotate(Matrix::Identity(3, 3), Matrix::Zero(2, 2)), InvalidArgument);
}

TEST_CASE("a gamma = 0 chain converges before the first rotation") {
  const Matrix h = build_chain_hamiltonian(ChainRealization::sample(nonresonant(5, 0.0)));
  const std::vector<double> schedule{0.5, 0.5};
  const SwResult res = sw_iterate(h, schedule);
  CHECK(res.converged);
  CHECK(res.steps.empty());
  CHECK(max_norm(res.rotation - Matrix::Identity(32, 32)) == 0.0);
}

TEST_CASE("perturbative norm decays geometrically on a nonresonant chain") {
  const Matrix h = build_chain_hamiltonian(ChainRealization::sample(nonresonant(6, 1e-3)));
  const auto schedule = default_sw_schedule(1e-3, 3);
  const SwResult res = sw_iterate(h, schedule, 0.0);
  REQUIRE(res.steps.size() == 3);
  CHECK_FALSE(res.failure.has_value());
  double previous = perturbative_offdiag_norm(h, schedule[0]);
  for (const SwStep& s : res.steps) {
    CHECK(s.perturbative_after <= 1e-2 * previous);
    previous = s.perturbative_after;
  }
  CHECK(orthogonality_defect(res.rotation) <= 1e-12);
  CHECK(max_norm(res.rotation * h * res.rotation.transpose() - res.hamiltonian) <= 1e-12);
}

TEST_CASE("first-order cancellation scales as gamma squared") {
  std::vector<double> x, y;
  for (const double gamma : {1e-2, 3e-3, 1e-3, 3e-4}) {
    const Matrix h = build_chain_hamiltonian(ChainRealization::sample(nonresonant(6, gamma)));
    const double eps = default_resonance_cutoff(gamma);
    const Matrix rotated = rotate(h, build_generator(split_hamiltonian(h, eps)));
    CHECK(oracle::eigenvalues(rotated).isApprox(oracle::eigenvalues(h), 1e-12));
    x.push_back(std::log(gamma));
    y.push_back(std::log(perturbative_offdiag_norm(rotated, eps)));
  }
  const double slope = (y.back() - y.front()) / (x.back() - x.front());
  CHECK(slope >= 1.9);
  CHECK(slope <= 2.1);
}

TEST_CASE("a resonant element survives every step") {
  ChainRealization r = ChainRealization::sample(nonresonant(4, 1e-2));
  r.h[2] = 0.05;  // |Delta E_2| <= 2 (0.05 + 0.5) can fall below the cutoff
  r.J[1] = 0.0;
  r.J[2] = 0.0;
  const Matrix h = build_chain_hamiltonian(r);
  const double eps = 0.5;
  const std::vector<double> schedule(3, eps);
  const SwResult res = sw_iterate(h, schedule);
  const Index s = 0b0000, t = 0b0100;  // flip of site 2: gap 2 * 0.05 = 0.1 < eps
  REQUIRE(std::abs(h(s, s) - h(t, t)) < eps);
  CHECK(split_hamiltonian(h, eps).j_res(t, s) != 0.0);
  const SplitHamiltonian after = split_hamiltonian(res.hamiltonian, eps);
  CHECK(std::abs(after.j_res(t, s)) == doctest::Approx(std::abs(h(t, s))).epsilon(0.05));
  CHECK(after.j_per(t, s) == 0.0);
}

TEST_CASE("schedule validation") {
  const Matrix h = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(sw_iterate(h, std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(sw_iterate(h, std::vector<double>{0.1, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(sw_iterate(h, std::vector<double>{0.1, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(default_sw_schedule(0.1, 0), InvalidArgument);
  const auto schedule = default_sw_schedule(1e-20, 2);
  REQUIRE(schedule.size() == 2);
  CHECK(schedule[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(schedule[1] == schedule[0]);
}

TEST_CASE("accumulated rotation is quasilocal") {
  const int n = 10;
  const Matrix h = build_chain_hamiltonian(ChainRealization::sample(nonresonant(n, 1e-3)));
  const SwResult res = sw_iterate(h, default_sw_schedule(1e-3, 2), 0.0);
  std::vector<std::vector<double>> by_distance(5);
  for (Index s = 0; s < h.rows(); ++s) {
    for (Index t = 0; t < h.cols(); ++t) {
      const int k = std::popcount(static_cast<std::uint64_t>(s ^ t));
      if (k >= 1 && k <= 4) by_distance[static_cast<std::size_t>(k)].push_back(std::abs(res.rotation(s, t)));
    }
  }
  double previous = INFINITY;
  for (int k = 1; k <= 4; ++k) {
    auto& v = by_distance[static_cast<std::size_t>(k)];
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    const double median = v[v.size() / 2];
    CAPTURE(k);
    CHECK(median < previous);
    previous = median;
  }
}
