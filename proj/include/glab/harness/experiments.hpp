#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "glab/harness/config.hpp"
#include "glab/harness/record.hpp"

namespace glab {

/// Everything the bath-model experiments measure on one diagonalized
/// realization.
struct BathEvaluation {
  double d_bath = 0.0;  // D(O_B)
  double r_mean = 0.0;
  std::int64_t r_count = 0;
  std::int64_t r_skipped = 0;
  double sumrule_residual = 0.0;  // worst over the probes evaluated
  std::vector<double> d_local;    // D(S^x_i) at distance i = 1..n_loc; empty if not requested
};

/// Shares diagonalizations between experiments that look at the same
/// realization (an n_loc sweep and a distance sweep over the same seeds, say).
/// Keyed on the full parameter set, both seeds and the window fraction.
class EvaluationCache {
 public:
  std::optional<BathEvaluation> find(const std::string& key, bool need_local) const;
  void store(const std::string& key, BathEvaluation value);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, BathEvaluation> entries_;
};

struct RunContext {
  EvaluationCache* cache = nullptr;
  // Called from worker threads as realizations finish; may be empty.
  std::function<void(const std::string&)> progress;
};

/// Diagonalizes one bath+LIOM realization and evaluates D(O_B), the gap
/// ratio and, if `with_local`, D(S^x_i) for every added spin.
BathEvaluation evaluate_bath_realization(const BathLiomParams& params, std::uint64_t disorder_seed,
                                         std::uint64_t probe_seed, double window_fraction,
                                         bool with_local, Index max_dim);

ExperimentRecord run_bath_liom_sweep(const ExperimentConfig& cfg, const RunContext& ctx = {});
ExperimentRecord run_distance_sweep(const ExperimentConfig& cfg, const RunContext& ctx = {});
ExperimentRecord run_chain_spectrum(const ExperimentConfig& cfg, const RunContext& ctx = {});
ExperimentRecord run_sw_step(const ExperimentConfig& cfg, const RunContext& ctx = {});
ExperimentRecord run_percolation_1d(const ExperimentConfig& cfg, const RunContext& ctx = {});
ExperimentRecord run_criteria(const ExperimentConfig& cfg, const RunContext& ctx = {});

ExperimentRecord run_experiment(const ExperimentConfig& cfg, const RunContext& ctx = {});

}  // namespace glab
