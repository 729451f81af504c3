// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "glab/diagnostics.hpp"
#include "glab/harness/experiments.hpp"
#include "glab/harness/output.hpp"
#include "glab/harness/seeds.hpp"
#include "glab/linalg.hpp"
#include "glab/models.hpp"
#include "glab/random.hpp"
#include "glab/resonance.hpp"
#include "glab/rotation.hpp"
#include "oracles.hpp"

using namespace glab;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Bath sweeps, distance sweep and bath gap ratio.
constexpr int kBathRealizations = 50;
constexpr double kStepTolerance = 0.2;
constexpr double kFig5RuntimeLimit = 3600.0;
constexpr double kControlLimit = 0.3;
constexpr double kFlatLimit = 0.4;
constexpr double kGrowthLimit = 1.0;
constexpr double kSlopeLo = -0.65, kSlopeHi = -0.40;
constexpr double kBathRLo = 0.51, kBathRHi = 0.545;
// Chain gap ratio.
constexpr int kChainRealizations = 20;
constexpr double kChainRLo = 0.37, kChainRHi = 0.40;
// Rotation scaling.
constexpr double kSwSlopeLo = 1.9, kSwSlopeHi = 2.1;
// Exactness.
constexpr double kEigenTol = 1e-10;
constexpr double kRotationTol = 1e-9;
constexpr double kSumRuleTol = 1e-8;
constexpr double kIprSlack = 1e-12;
// Resonance density.
constexpr double kDensityRelTol = 0.05;

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void stage(const std::string& what) {
  std::printf("... %s\n", what.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) { return format_number(v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double D_at(const ExperimentRecord& rec, double n) { return rec.number(rec.row_at(n), "D_mean"); }

std::string bath_yaml(const std::string& name, int n_bath, double J0, double alpha, const std::string& sweep) {
  std::ostringstream s;
  s << "experiment: " << (sweep == "distance" ? "distance-sweep" : "bath-liom-sweep") << "\n"
    << "name: " << name << "\nseed: 2017\nrealizations: " << kBathRealizations << "\n"
    << "model: {n_bath: " << n_bath << ", n_loc: 6, J0: " << format_number(J0) << ", alpha: " << alpha
    << ", W_Gf: 4.0, h_bounds: [0.5, 1.5]}\n";
  if (sweep == "distance") {
    s << "sweep: {variable: distance, values: [0, 1, 2, 3, 4, 5, 6]}\n";
  } else {
    s << "sweep: {variable: n_loc, values: [0, 1, 2, 3, 4, 5, 6]}\n";
  }
  return s.str();
}

Matrix random_symmetric(Index n, Rng& rng) {
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
  }
  return a;
}

std::string serialize(const ExperimentRecord& rec) { return to_csv(rec) + to_json(rec); }

}  // namespace

int main() {
  EvaluationCache cache;
  const RunContext ctx{&cache, {}};
  double worst_sumrule = 0.0;

  // The distance sweep runs first so the n_loc sweep finds every n_loc = 6
  // diagonalization (with the local probes) already cached. The wall time
  // below therefore includes the distance sweep and bounds the cost of the
  // n_loc sweep on its own.
  stage("distance sweep and bath sweep, alpha = 0.75");
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentRecord fig6 = run_distance_sweep(parse_config(bath_yaml("fig6", 6, 1.0, 0.75, "distance")), ctx);
  const ExperimentRecord fig5 = run_bath_liom_sweep(parse_config(bath_yaml("fig5", 6, 1.0, 0.75, "n_loc")), ctx);
  const double fig5_seconds = seconds_since(t0);
  worst_sumrule = std::max({worst_sumrule, fig6.summary_number("sumrule_max_residual"),
                            fig5.summary_number("sumrule_max_residual")});
  {
    bool ok = fig5_seconds <= kFig5RuntimeLimit && fig5.skips.empty();
    std::string detail = "D(n+1)-D(n) for n=1..5:";
    for (int n = 1; n <= 5; ++n) {
      const double step = D_at(fig5, n + 1) - D_at(fig5, n);
      ok = ok && std::abs(step - kLn2) <= kStepTolerance;
      detail += " " + fmt(step);
    }
    detail += " (target ln2 +- " + fmt(kStepTolerance) + "); wall " + fmt(std::round(fig5_seconds)) +
              " s (limit " + fmt(kFig5RuntimeLimit) + ")";
    report(ok, "fig5_ln2_growth", detail);
  }

  stage("bath sweep, single-spin bath");
  {
    const ExperimentRecord control =
        run_bath_liom_sweep(parse_config(bath_yaml("fig5-control", 0, 1.0, 0.75, "n_loc")), ctx);
    bool ok = control.skips.empty();
    double worst = 0.0;
    for (int n = 0; n <= 6; ++n) {
      worst = std::max(worst, D_at(control, n) - D_at(control, 0));
    }
    ok = ok && worst < kControlLimit;
    report(ok, "fig5_control_flat", "max D(n)-D(0) = " + fmt(worst) + " (limit " + fmt(kControlLimit) + ")");
  }

  stage("bath sweep, alpha = 0.5");
  {
    // Coupling chosen so the buffer-length formula gives exactly 3.
    const double alpha = 0.5, W = 4.0, d_bath = 64.0;
    const double J0 = W / std::sqrt(d_bath) * std::pow(std::sqrt(2.0) * alpha, -3.0);
    const double ell = predicted_buffer_length(J0, alpha, W, d_bath).value();
    const ExperimentRecord dich =
        run_bath_liom_sweep(parse_config(bath_yaml("dichotomy", 6, J0, alpha, "n_loc")), ctx);
    worst_sumrule = std::max(worst_sumrule, dich.summary_number("sumrule_max_residual"));
    const int l = static_cast<int>(std::lround(ell));
    const double flat = D_at(dich, 6) - D_at(dich, l + 1);
    const double growth = D_at(dich, l) - D_at(dich, 0);
    const bool ok = std::abs(ell - 3.0) < 1e-9 && dich.skips.empty() && flat < kFlatLimit && growth > kGrowthLimit;
    report(ok, "dichotomy_flattening",
           "J0 = " + fmt(J0) + ", predicted l = " + fmt(ell) + "; D(6)-D(" + std::to_string(l + 1) +
               ") = " + fmt(flat) + " (limit " + fmt(kFlatLimit) + "), D(" + std::to_string(l) +
               ")-D(0) = " + fmt(growth) + " (need > " + fmt(kGrowthLimit) + ")");
  }

  {
    const double slope = fig6.summary_number("fitted_slope");
    const bool ok = fig6.skips.empty() && slope >= kSlopeLo && slope <= kSlopeHi;
    report(ok, "fig6_distance_slope",
           "fitted slope " + fmt(slope) + " in [" + fmt(kSlopeLo) + ", " + fmt(kSlopeHi) + "], theory " +
               fmt(fig6.summary_number("theory_slope")));
  }

  stage("chain spectrum, 12 sites");
  {
    const ExperimentRecord chain = run_chain_spectrum(
        parse_config("experiment: chain-spectrum\nname: chain-r\nseed: 2017\nrealizations: " +
                     std::to_string(kChainRealizations) +
                     "\nmodel: {n_sites: 12, gamma: 0.001, h_bounds: [-1, 1], Gamma_bounds: [0.5, 1.5], "
                     "J_bounds: [-0.25, 0.25]}\nsweep: {variable: gamma, values: [0.001]}\n"),
        ctx);
    const double r_chain = chain.number(0, "r_mean");
    const double r_bath = fig5.number(fig5.row_at(6), "r_mean");
    const bool ok = chain.skips.empty() && r_chain >= kChainRLo && r_chain <= kChainRHi && r_bath >= kBathRLo &&
                    r_bath <= kBathRHi;
    report(ok, "gap_ratio_crossover",
           "chain r = " + fmt(r_chain) + " in [" + fmt(kChainRLo) + ", " + fmt(kChainRHi) + "], bath r(n_loc=6) = " +
               fmt(r_bath) + " in [" + fmt(kBathRLo) + ", " + fmt(kBathRHi) + "]");
  }

  stage("rotation scaling, 6 sites");
  {
    const ExperimentRecord sw = run_sw_step(
        parse_config("experiment: sw-step\nname: sw\nseed: 7\nrealizations: 1\n"
                     "model: {n_sites: 6, gamma: 0.01, h_bounds: [1, 2], Gamma_bounds: [0.5, 1.5], "
                     "J_bounds: [-0.25, 0.25]}\n"
                     "sweep: {variable: gamma, values: [0.01, 0.003, 0.001, 0.0003]}\nsw: {steps: 1}\n"),
        ctx);
    const double slope = sw.summary_number("step1_loglog_slope");
    // The largest cutoff used is 0.01^(1/20); a nonresonant chain has every
    // |Delta E| above it for any neighbour configuration.
    ChainParams p{6, 0.01, {1, 2}, {0.5, 1.5}, {-0.25, 0.25}, derive_seed(7, 0, SeedStream::Disorder)};
    const bool nonresonant = detect_resonant_sites(ChainRealization::sample(p)).count() == 0;
    const bool ok = sw.skips.empty() && nonresonant && slope >= kSwSlopeLo && slope <= kSwSlopeHi;
    report(ok, "sw_quadratic_scaling",
           "log-log slope " + fmt(slope) + " in [" + fmt(kSwSlopeLo) + ", " + fmt(kSwSlopeHi) +
               "], nonresonant chain: " + (nonresonant ? "yes" : "no"));
  }

  stage("exactness suite");
  {
    Rng rng(20170101);
    double eig = 0.0;
    for (const Index n : {1, 2, 3, 7, 16, 33, 64, 100, 257, 513, 700}) {
      for (int rep = 0; rep < 2; ++rep) {
        const Matrix h = random_symmetric(n, rng);
        const Spectrum<double> s = symmetric_eigen(h);
        eig = std::max({eig, reconstruction_defect(s, h), orthogonality_defect(s.eigenvectors)});
      }
    }
    {
      BathLiomParams bp{6, 4, 1.0, 0.75, 4.0, {0.5, 1.5}, 0};
      Rng brng(derive_seed(2017, 0, SeedStream::Disorder));
      const BathLiomModel model = build_bath_liom_hamiltonian(bp, brng);
      const Matrix& h = model.hamiltonian;
      const Spectrum<double> s = symmetric_eigen(h);
      eig = std::max({eig, reconstruction_defect(s, h) / std::max(1.0, max_norm(h)),
                      orthogonality_defect(s.eigenvectors)});

      // IPR bounds on every eigenstate of the full spectrum.
      const Index dim = h.rows();
      const IprResult bath_ipr = ipr(model.spin_flips.front(), s, IndexWindow{0, dim});
      double lo = 1e300, hi = 0.0;
      for (double v : bath_ipr.per_state) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      Rng prng(derive_seed(2017, 0, SeedStream::Probe));
      const Matrix probe = sample_goe_unit_trace(dim, prng);
      for (double v : ipr(probe, s, IndexWindow{0, dim}).per_state) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const bool ipr_ok = lo >= 1.0 - kIprSlack && hi <= static_cast<double>(dim) * (1.0 + kIprSlack);
      worst_sumrule = std::max(worst_sumrule, bath_ipr.sumrule_residual);

      double rot = 0.0;
      for (int rep = 0; rep < 6; ++rep) {
        ChainParams cp{8, 0.1, {-1, 1}, {0.5, 1.5}, {-0.25, 0.25}, derive_seed(99, rep, SeedStream::Disorder)};
        const Matrix hc = build_chain_hamiltonian(ChainRealization::sample(cp));
        const auto schedule = default_sw_schedule(cp.gamma, 4);
        const SwResult res = sw_iterate(hc, schedule);
        const Vector before = symmetric_eigenvalues(hc);
        const Vector after = symmetric_eigenvalues(res.hamiltonian);
        rot = std::max(rot, (before - after).cwiseAbs().maxCoeff());
      }

      // Byte-identical reruns, serial against threaded, through the files.
      const std::string small = "experiment: bath-liom-sweep\nname: rerun\nseed: 3\nrealizations: 4\n"
                                "model: {n_bath: 4, n_loc: 0, J0: 1, alpha: 0.75, W_Gf: 4, h_bounds: [0.5, 1.5]}\n"
                                "sweep: {values: [0, 1, 2, 3]}\n";
      // The JSON echoes `jobs`, so only the CSV is compared across job counts.
      ExperimentConfig a = parse_config(small);
      ExperimentConfig b = a;
      b.jobs = 3;
      const auto dir = std::filesystem::temp_directory_path() / "glab-acceptance";
      const auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
      };
      const OutputPaths pa = write_record(run_bath_liom_sweep(a), dir / "a");
      const std::string first_json = slurp(pa.json);
      const std::string first_csv = slurp(pa.csv);
      write_record(run_bath_liom_sweep(a), dir / "a");
      const OutputPaths pb = write_record(run_bath_liom_sweep(b), dir / "b");
      const ExperimentConfig sw_cfg = parse_config(
          "experiment: sw-step\nseed: 4\nrealizations: 3\nmodel: {n_sites: 6, gamma: 0.01, h_bounds: [-1, 1], "
          "Gamma_bounds: [0.5, 1.5], J_bounds: [-0.25, 0.25]}\n");
      const bool same = first_csv == slurp(pa.csv) && first_json == slurp(pa.json) && first_csv == slurp(pb.csv) &&
                        serialize(run_sw_step(sw_cfg)) == serialize(run_sw_step(sw_cfg));

      const bool ok = eig <= kEigenTol && rot <= kRotationTol && worst_sumrule <= kSumRuleTol && ipr_ok && same;
      report(ok, "exactness_suite",
             "eigensolver " + fmt(eig) + " (<= " + fmt(kEigenTol) + "), rotation " + fmt(rot) + " (<= " +
                 fmt(kRotationTol) + "), sum rule " + fmt(worst_sumrule) + " (<= " + fmt(kSumRuleTol) +
                 "), IPR range [" + fmt(lo) + ", " + fmt(hi) + "] vs [1, " + std::to_string(dim) +
                 "], reruns identical: " + (same ? "yes" : "no"));
    }
  }

  stage("resonance density, 10^6 sites");
  {
    const ExperimentRecord perc = run_percolation_1d(
        parse_config("experiment: percolation-1d\nname: percolation\nseed: 2017\nrealizations: 1\n"
                     "model: {n_sites: 1000000, gamma: 0.001, h_bounds: [-1, 1], Gamma_bounds: [0.5, 1.5], "
                     "J_bounds: [-0.25, 0.25]}\nsweep: {variable: epsilon, values: [0.01, 0.001]}\n"),
        ctx);
    bool ok = perc.skips.empty();
    std::string detail;
    for (std::size_t i = 0; i < perc.rows.size(); ++i) {
      const double eps = perc.number(i, "epsilon");
      const double density = perc.number(i, "density_mean");
      const double p = oracle::resonance_probability(-1, 1, -0.25, 0.25, eps);
      const double rel = std::abs(density - p) / p;
      ok = ok && rel <= kDensityRelTol && density < 4.0 * eps && p < 4.0 * eps;
      detail += (i ? "; " : "") + std::string("eps ") + fmt(eps) + ": empirical " + fmt(density) + ", oracle " +
                fmt(p) + ", rel " + fmt(rel) + " (<= " + fmt(kDensityRelTol) + "), 4eps " + fmt(4.0 * eps);
    }
    report(ok, "resonance_density", detail);
  }

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
