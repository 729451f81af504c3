#include "glab/harness/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "glab/diagnostics.hpp"
#include "glab/harness/pool.hpp"
#include "glab/harness/seeds.hpp"
#include "glab/resonance.hpp"
#include "glab/rotation.hpp"

namespace glab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cache_key(const BathLiomParams& p, std::uint64_t disorder, std::uint64_t probe, double wf) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d|%d|%a|%a|%a|%a|%a|%llu|%llu|%a", p.n_bath, p.n_loc, p.J0, p.alpha,
                p.W_Gf, p.h_bounds.lo, p.h_bounds.hi, static_cast<unsigned long long>(disorder),
                static_cast<unsigned long long>(probe), wf);
  return buf;
}

// Outcome of one realization at one sweep point: data, or the reason it has none.
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string failure;
};

template <typename T, typename Fn>
std::vector<Outcome<T>> run_realizations(const ExperimentConfig& cfg, const RunContext& ctx,
                                         const std::string& label, Fn fn) {
  return parallel_map(static_cast<std::size_t>(cfg.n_realizations), cfg.jobs, [&](std::size_t i) {
    Outcome<T> out;
    try {
      out.value = fn(static_cast<std::uint64_t>(i));
    } catch (const NumericalError& e) {
      out.failure = e.what();
    }
    if (ctx.progress) {
      ctx.progress(label + " realization " + std::to_string(i + 1) + "/" + std::to_string(cfg.n_realizations));
    }
    return out;
  });
}

template <typename T>
void record_skips(ExperimentRecord& rec, const std::vector<Outcome<T>>& outcomes, double sweep_value) {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].value) {
      rec.skips.push_back({static_cast<std::int64_t>(i), sweep_value, outcomes[i].failure});
    }
  }
}

// Seeds use all 64 bits, which a signed cell cannot hold.
Cell seed_cell(std::uint64_t seed) { return std::to_string(seed); }

ExperimentRecord start_record(const ExperimentConfig& cfg, ExperimentKind expected) {
  if (cfg.kind != expected) {
    throw ConfigError("config describes " + std::string(to_string(cfg.kind)) + ", not " +
                      std::string(to_string(expected)));
  }
  cfg.validate();
  ExperimentRecord rec;
  rec.config = cfg;
  for (int r = 0; r < cfg.n_realizations; ++r) {
    const auto ur = static_cast<std::uint64_t>(r);
    rec.seeds.push_back({r, derive_seed(cfg.master_seed, ur, SeedStream::Disorder),
                         derive_seed(cfg.master_seed, ur, SeedStream::Probe)});
  }
  return rec;
}

std::string point_label(const ExperimentConfig& cfg, double value) {
  return std::string(to_string(cfg.kind)) + " " + cfg.sweep_variable + "=" + std::to_string(value);
}

BathEvaluation evaluate_cached(const RunContext& ctx, const BathLiomParams& p, const RealizationSeeds& s,
                               double wf, bool with_local, Index cap) {
  const std::string key = cache_key(p, s.disorder, s.probe, wf);
  if (ctx.cache) {
    if (auto hit = ctx.cache->find(key, with_local)) return *hit;
  }
  BathEvaluation e = evaluate_bath_realization(p, s.disorder, s.probe, wf, with_local, cap);
  if (ctx.cache) ctx.cache->store(key, e);
  return e;
}

std::vector<double> finite_only(const std::vector<double>& xs) {
  std::vector<double> out;
  for (const double x : xs) {
    if (std::isfinite(x)) out.push_back(x);
  }
  return out;
}

}  // namespace

std::optional<BathEvaluation> EvaluationCache::find(const std::string& key, bool need_local) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (need_local && it->second.d_local.empty()) return std::nullopt;
  return it->second;
}

void EvaluationCache::store(const std::string& key, BathEvaluation value) {
  std::lock_guard lock(mutex_);
  auto& slot = entries_[key];
  if (value.d_local.empty() && !slot.d_local.empty()) return;
  slot = std::move(value);
}

std::size_t EvaluationCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

BathEvaluation evaluate_bath_realization(const BathLiomParams& params, std::uint64_t disorder_seed,
                                         std::uint64_t probe_seed, double window_fraction,
                                         bool with_local, Index max_dim) {
  Rng rng(disorder_seed);
  BathLiomModel model = build_bath_liom_hamiltonian(params, rng, max_dim);
  Rng probe_rng(probe_seed);
  const BathOperator probe{sample_goe_unit_trace(params.bath_dim(), probe_rng), Index{1} << params.n_loc};

  const Spectrum<double> spectrum = symmetric_eigen(model.hamiltonian);
  model.hamiltonian.resize(0, 0);
  const IndexWindow window = mid_spectrum_window(spectrum, window_fraction);

  BathEvaluation e;
  const IprResult bath = ipr(probe, spectrum, window);
  e.d_bath = bath.mean_log;
  e.sumrule_residual = bath.sumrule_residual;
  if (window.count >= 3) {
    const GapRatioStats g = gap_ratio_stats(spectrum.eigenvalues, window);
    e.r_mean = g.count > 0 ? g.mean : kNaN;
    e.r_count = g.count;
    e.r_skipped = g.skipped;
  } else {
    e.r_mean = kNaN;
  }
  if (with_local) {
    for (const LocalOperator& flip : model.spin_flips) {
      const IprResult local = ipr(flip, spectrum, window);
      e.d_local.push_back(local.mean_log);
      e.sumrule_residual = std::max(e.sumrule_residual, local.sumrule_residual);
    }
  }
  return e;
}

ExperimentRecord run_bath_liom_sweep(const ExperimentConfig& cfg, const RunContext& ctx) {
  ExperimentRecord rec = start_record(cfg, ExperimentKind::BathLiomSweep);
  rec.columns = {"sweep_value", "n_ok", "D_mean", "D_stderr", "r_mean", "r_stderr", "sumrule_max_residual"};
  rec.sample_columns = {"realization", "disorder_seed", "sweep_value", "D", "r", "sumrule_residual"};
  double worst_sumrule = 0.0;
  for (const double value : cfg.sweep_values) {
    ExperimentConfig point = cfg;
    apply_sweep_value(point, value);
    const auto outcomes = run_realizations<BathEvaluation>(cfg, ctx, point_label(cfg, value), [&](std::uint64_t r) {
      return evaluate_cached(ctx, point.bath, rec.seeds[r], cfg.window_fraction, false, cfg.memory_cap);
    });
    record_skips(rec, outcomes, value);
    std::vector<double> d, rs;
    double sumrule = 0.0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      const auto& o = outcomes[r];
      if (!o.value) continue;
      d.push_back(o.value->d_bath);
      rs.push_back(o.value->r_mean);
      sumrule = std::max(sumrule, o.value->sumrule_residual);
      rec.samples.push_back({static_cast<std::int64_t>(r), seed_cell(rec.seeds[r].disorder), value, o.value->d_bath,
                             o.value->r_mean, o.value->sumrule_residual});
    }
    const Aggregate ad = aggregate(d);
    const Aggregate ar = aggregate(finite_only(rs));
    worst_sumrule = std::max(worst_sumrule, sumrule);
    rec.rows.push_back({value, ad.n, ad.mean, ad.stderr_, ar.mean, ar.stderr_, sumrule});
  }
  rec.summary.emplace_back("sumrule_max_residual", worst_sumrule);
  rec.summary.emplace_back("skipped", static_cast<std::int64_t>(rec.skips.size()));
  rec.summary.emplace_back("regime", std::string(to_string(classify_regime(cfg.bath.alpha))));
  if (cfg.bath.J0 > 0.0) {
    const auto ell = predicted_buffer_length(cfg.bath.J0, cfg.bath.alpha, cfg.bath.W_Gf,
                                             static_cast<double>(cfg.bath.bath_dim()));
    rec.summary.emplace_back("predicted_buffer_length", ell ? *ell : std::numeric_limits<double>::infinity());
  }
  return rec;
}

ExperimentRecord run_distance_sweep(const ExperimentConfig& cfg, const RunContext& ctx) {
  ExperimentRecord rec = start_record(cfg, ExperimentKind::DistanceSweep);
  rec.columns = {"distance", "n_ok", "D_mean", "D_stderr", "D_rel_mean", "D_rel_stderr", "theory_rel"};
  rec.sample_columns = {"realization", "disorder_seed", "distance", "D", "r", "sumrule_residual"};
  const auto outcomes = run_realizations<BathEvaluation>(cfg, ctx, point_label(cfg, cfg.bath.n_loc), [&](std::uint64_t r) {
    return evaluate_cached(ctx, cfg.bath, rec.seeds[r], cfg.window_fraction, true, cfg.memory_cap);
  });
  record_skips(rec, outcomes, static_cast<double>(cfg.bath.n_loc));

  std::vector<double> rs;
  double sumrule = 0.0;
  for (const auto& o : outcomes) {
    if (!o.value) continue;
    rs.push_back(o.value->r_mean);
    sumrule = std::max(sumrule, o.value->sumrule_residual);
  }

  std::vector<double> fit_x, fit_y;
  for (const double value : cfg.sweep_values) {
    const auto i = static_cast<std::size_t>(value);
    std::vector<double> d, rel;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      const auto& o = outcomes[r];
      if (!o.value) continue;
      const double di = i == 0 ? o.value->d_bath : o.value->d_local[i - 1];
      d.push_back(di);
      rel.push_back(di - o.value->d_bath);
      rec.samples.push_back({static_cast<std::int64_t>(r), seed_cell(rec.seeds[r].disorder), value, di,
                             o.value->r_mean, o.value->sumrule_residual});
    }
    const Aggregate ad = aggregate(d);
    const Aggregate arel = aggregate(rel);
    rec.rows.push_back({value, ad.n, ad.mean, ad.stderr_, arel.mean, arel.stderr_,
                        2.0 * value * std::log(cfg.bath.alpha)});
    if (i >= 1) {
      fit_x.push_back(value);
      fit_y.push_back(ad.mean);
    }
  }

  if (fit_x.size() >= 2) {
    const LineFit fit = fit_line(fit_x, fit_y);
    rec.summary.emplace_back("fitted_slope", fit.slope);
    rec.summary.emplace_back("fitted_intercept", fit.intercept);
  }
  rec.summary.emplace_back("theory_slope", 2.0 * std::log(cfg.bath.alpha));
  const Aggregate ar = aggregate(finite_only(rs));
  rec.summary.emplace_back("r_mean", ar.mean);
  rec.summary.emplace_back("r_stderr", ar.stderr_);
  rec.summary.emplace_back("sumrule_max_residual", sumrule);
  rec.summary.emplace_back("skipped", static_cast<std::int64_t>(rec.skips.size()));
  return rec;
}

ExperimentRecord run_chain_spectrum(const ExperimentConfig& cfg, const RunContext& ctx) {
  ExperimentRecord rec = start_record(cfg, ExperimentKind::ChainSpectrum);
  rec.columns = {"sweep_value", "n_ok", "r_mean", "r_stderr", "resonant_density_mean", "resonant_density_stderr",
                 "max_block_mean", "gap_skips"};
  struct ChainResult {
    double r = 0.0;
    std::int64_t skipped = 0;
    double density = 0.0;
    double max_block = 0.0;
  };
  for (const double value : cfg.sweep_values) {
    ExperimentConfig point = cfg;
    apply_sweep_value(point, value);
    const auto outcomes = run_realizations<ChainResult>(cfg, ctx, point_label(cfg, value), [&](std::uint64_t r) {
      Rng rng(rec.seeds[r].disorder);
      const ChainRealization chain = ChainRealization::sample(point.chain, rng);
      const Vector levels = symmetric_eigenvalues(build_chain_hamiltonian(chain, cfg.memory_cap));
      const IndexWindow window = mid_spectrum_window(levels.size(), cfg.window_fraction);
      ChainResult out;
      if (window.count >= 3) {
        const GapRatioStats g = gap_ratio_stats(levels, window);
        out.r = g.count > 0 ? g.mean : kNaN;
        out.skipped = g.skipped;
      } else {
        out.r = kNaN;
      }
      // The cutoff gamma^(1/20) vanishes with gamma: a classical chain has no resonances.
      if (chain.params.gamma > 0.0) {
        const ResonanceReport report = detect_resonant_sites(chain);
        out.density = report.empirical_density;
        for (const auto& b : report.blocks) out.max_block = std::max(out.max_block, static_cast<double>(b.size()));
      }
      return out;
    });
    record_skips(rec, outcomes, value);
    std::vector<double> rs, dens, blocks;
    std::int64_t gap_skips = 0;
    for (const auto& o : outcomes) {
      if (!o.value) continue;
      rs.push_back(o.value->r);
      dens.push_back(o.value->density);
      blocks.push_back(o.value->max_block);
      gap_skips += o.value->skipped;
    }
    const Aggregate ar = aggregate(finite_only(rs));
    const Aggregate ad = aggregate(dens);
    const Aggregate ab = aggregate(blocks);
    rec.rows.push_back({value, ad.n, ar.mean, ar.stderr_, ad.mean, ad.stderr_, ab.mean, gap_skips});
  }
  rec.summary.emplace_back("skipped", static_cast<std::int64_t>(rec.skips.size()));
  return rec;
}

ExperimentRecord run_sw_step(const ExperimentConfig& cfg, const RunContext& ctx) {
  ExperimentRecord rec = start_record(cfg, ExperimentKind::SwStep);
  rec.columns = {"sweep_value", "step", "n_ok", "epsilon", "perturbative_before_mean", "perturbative_after_mean",
                 "perturbative_after_stderr", "resonant_after_mean", "generator_norm_mean"};
  struct SwRun {
    std::vector<SwStep> steps;  // steps[0] describes the unrotated matrix
    double spectrum_defect = 0.0;
  };
  double worst_defect = 0.0;
  std::vector<double> fit_x, fit_y;
  for (const double gamma : cfg.sweep_values) {
    ExperimentConfig point = cfg;
    apply_sweep_value(point, gamma);
    const std::vector<double> schedule =
        !cfg.sw.schedule.empty() ? cfg.sw.schedule
        : gamma > 0.0            ? default_sw_schedule(gamma, cfg.sw.steps)
                                 : std::vector<double>(static_cast<std::size_t>(cfg.sw.steps), 1.0);
    const auto outcomes = run_realizations<SwRun>(cfg, ctx, point_label(cfg, gamma), [&](std::uint64_t r) {
      Rng rng(rec.seeds[r].disorder);
      const ChainRealization chain = ChainRealization::sample(point.chain, rng);
      const Matrix h = build_chain_hamiltonian(chain, cfg.memory_cap);
      const SwResult res = sw_iterate(h, schedule);
      if (res.failure) throw NumericalError("sw-step: " + *res.failure);
      SwRun run;
      SwStep initial;
      initial.epsilon = schedule.front();
      initial.perturbative_after = perturbative_offdiag_norm(h, schedule.front());
      initial.resonant_after = resonant_offdiag_norm(h, schedule.front());
      initial.perturbative_before = initial.perturbative_after;
      run.steps.push_back(initial);
      run.steps.insert(run.steps.end(), res.steps.begin(), res.steps.end());
      const Vector before = symmetric_eigenvalues(h);
      const Vector after = symmetric_eigenvalues(res.hamiltonian);
      run.spectrum_defect = (before - after).cwiseAbs().maxCoeff() / std::max(1.0, max_norm(h));
      return run;
    });
    record_skips(rec, outcomes, gamma);
    for (std::size_t k = 0; k <= schedule.size(); ++k) {
      std::vector<double> before, after, res_after, gen;
      for (const auto& o : outcomes) {
        if (!o.value || o.value->steps.size() <= k) continue;
        const SwStep& s = o.value->steps[k];
        before.push_back(s.perturbative_before);
        after.push_back(s.perturbative_after);
        res_after.push_back(s.resonant_after);
        gen.push_back(s.generator_norm);
      }
      if (before.empty()) break;
      const Aggregate a_after = aggregate(after);
      rec.rows.push_back({gamma, static_cast<std::int64_t>(k), a_after.n, k == 0 ? schedule.front() : schedule[k - 1],
                          aggregate(before).mean, a_after.mean, a_after.stderr_, aggregate(res_after).mean,
                          aggregate(gen).mean});
      if (k == 1 && gamma > 0.0 && a_after.mean > 0.0) {
        fit_x.push_back(std::log(gamma));
        fit_y.push_back(std::log(a_after.mean));
      }
    }
    for (const auto& o : outcomes) {
      if (o.value) worst_defect = std::max(worst_defect, o.value->spectrum_defect);
    }
  }
  if (fit_x.size() >= 2) rec.summary.emplace_back("step1_loglog_slope", fit_line(fit_x, fit_y).slope);
  rec.summary.emplace_back("spectrum_defect_max", worst_defect);
  rec.summary.emplace_back("skipped", static_cast<std::int64_t>(rec.skips.size()));
  return rec;
}

ExperimentRecord run_percolation_1d(const ExperimentConfig& cfg, const RunContext& ctx) {
  ExperimentRecord rec = start_record(cfg, ExperimentKind::Percolation1d);
  rec.columns = {"epsilon", "n_ok", "density_mean", "density_stderr", "blocks_per_site_mean", "mean_block_size",
                 "max_block_size", "quadrature_probability", "union_bound"};
  struct Clusters {
    double density = 0.0;
    double blocks_per_site = 0.0;
    std::int64_t resonant = 0;
    std::int64_t blocks = 0;
    std::int64_t largest = 0;
  };
  for (const double eps : cfg.sweep_values) {
    const auto outcomes = run_realizations<Clusters>(cfg, ctx, point_label(cfg, eps), [&](std::uint64_t r) {
      Rng rng(rec.seeds[r].disorder);
      const ChainRealization chain = ChainRealization::sample(cfg.chain, rng);
      const ResonanceReport report = detect_resonant_sites(chain, eps);
      Clusters c;
      c.density = report.empirical_density;
      c.resonant = report.count();
      c.blocks = static_cast<std::int64_t>(report.blocks.size());
      c.blocks_per_site = static_cast<double>(c.blocks) / static_cast<double>(chain.n_sites());
      for (const auto& b : report.blocks) c.largest = std::max<std::int64_t>(c.largest, b.size());
      return c;
    });
    record_skips(rec, outcomes, eps);
    std::vector<double> dens, bps;
    std::int64_t resonant = 0, blocks = 0, largest = 0;
    for (const auto& o : outcomes) {
      if (!o.value) continue;
      dens.push_back(o.value->density);
      bps.push_back(o.value->blocks_per_site);
      resonant += o.value->resonant;
      blocks += o.value->blocks;
      largest = std::max(largest, o.value->largest);
    }
    const Aggregate ad = aggregate(dens);
    const double mean_block = blocks > 0 ? static_cast<double>(resonant) / static_cast<double>(blocks) : kNaN;
    rec.rows.push_back({eps, ad.n, ad.mean, ad.stderr_, aggregate(bps).mean, mean_block, largest,
                        resonance_probability(cfg.chain.h_bounds, cfg.chain.J_bounds, eps), 4.0 * eps});
  }
  rec.summary.emplace_back("skipped", static_cast<std::int64_t>(rec.skips.size()));
  return rec;
}

ExperimentRecord run_criteria(const ExperimentConfig& cfg, const RunContext&) {
  ExperimentRecord rec = start_record(cfg, ExperimentKind::Criteria);
  rec.seeds.clear();  // nothing random here
  rec.columns = {"sweep_value", "cutoff", "log2_bubble_ratio", "buffer_radius", "log2_bootstrap_ratio",
                 "first_spin_criterion", "buffer_length", "regime"};
  for (const double value : cfg.sweep_values) {
    ExperimentConfig point = cfg;
    apply_sweep_value(point, value);
    const CriteriaParams& c = point.criteria;
    const double d_gf = std::ldexp(1.0, c.n_bath);
    const auto ell = predicted_buffer_length(c.J0, c.alpha, c.W_Gf, d_gf);
    rec.rows.push_back({value, default_resonance_cutoff(c.gamma), log2_bubble_resonance_ratio(c.gamma, c.r, c.L, c.d),
                        buffer_radius(c.gamma, c.L, c.d), log2_bootstrap_ratio(c.gamma, c.r, c.d),
                        first_spin_criterion(c.J0 * c.alpha, c.W_Gf, d_gf),
                        ell ? *ell : std::numeric_limits<double>::infinity(),
                        std::string(to_string(classify_regime(c.alpha)))});
  }
  return rec;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg, const RunContext& ctx) {
  switch (cfg.kind) {
    case ExperimentKind::ChainSpectrum:
      return run_chain_spectrum(cfg, ctx);
    case ExperimentKind::BathLiomSweep:
      return run_bath_liom_sweep(cfg, ctx);
    case ExperimentKind::DistanceSweep:
      return run_distance_sweep(cfg, ctx);
    case ExperimentKind::SwStep:
      return run_sw_step(cfg, ctx);
    case ExperimentKind::Percolation1d:
      return run_percolation_1d(cfg, ctx);
    case ExperimentKind::Criteria:
      return run_criteria(cfg, ctx);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace glab
