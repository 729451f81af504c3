#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glab/models.hpp"

namespace glab {

enum class ExperimentKind { ChainSpectrum, BathLiomSweep, DistanceSweep, SwStep, Percolation1d, Criteria };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

// Inputs of the closed-form resonance and buffer criteria.
struct CriteriaParams {
  double gamma = 0.5;
  double L = 4.0;  // bubble diameter
  int d = 1;       // lattice dimension
  double r = 1.0;  // distance from the bubble
  double J0 = 1.0;
  double alpha = 0.5;
  double W_Gf = 4.0;
  int n_bath = 6;
};

struct SwSettings {
  std::vector<double> schedule;  // explicit cutoffs; empty means default
  int steps = 3;                 // length of the default gamma^(1/20) schedule
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::BathLiomSweep;
  std::string name;  // output file stem; defaults to the kind
  ChainParams chain{};
  BathLiomParams bath{};
  CriteriaParams criteria{};
  SwSettings sw{};
  std::string sweep_variable;
  std::vector<double> sweep_values;
  int n_realizations = 1;
  std::uint64_t master_seed = 0;
  double window_fraction = 0.2;
  std::string output_dir = ".";
  Index memory_cap = kDefaultDimensionCap;
  int jobs = 1;

  std::string stem() const { return name.empty() ? std::string(to_string(kind)) : name; }

  // Throws ConfigError for malformed settings and CapacityError when a sweep
  // point would exceed the memory cap.
  void validate() const;
};

/// Sweep variables each experiment accepts; the first is the default.
std::vector<std::string_view> sweep_variables(ExperimentKind kind);

/// Parses a YAML experiment description (schema in README.md). Keys that do
/// not belong to the experiment are rejected. The result is validated.
ExperimentConfig parse_config(std::string_view yaml);
ExperimentConfig load_config(const std::string& path);

/// Applies `value` to the model parameter named by the sweep variable.
/// Distance and epsilon sweeps leave the model untouched.
void apply_sweep_value(ExperimentConfig& cfg, double value);

}  // namespace glab
