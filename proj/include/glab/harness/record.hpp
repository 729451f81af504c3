#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "glab/harness/config.hpp"

namespace glab {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Aggregate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample stddev / sqrt(n); NaN when n < 2
  std::int64_t n = 0;
};

Aggregate aggregate(std::span<const double> samples);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept (at least two distinct x).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct RealizationSeeds {
  std::int64_t realization = 0;
  std::uint64_t disorder = 0;
  std::uint64_t probe = 0;
};

// A realization (at one sweep point) that produced no data, and why.
struct Skip {
  std::int64_t realization = 0;
  double sweep_value = 0.0;
  std::string reason;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<RealizationSeeds> seeds;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Skip> skips;
  // Experiment-level results (fitted slopes and the like), in insertion order.
  std::vector<std::pair<std::string, Cell>> summary;
  // Per-realization values behind the aggregated rows; JSON sidecar only.
  std::vector<std::string> sample_columns;
  std::vector<std::vector<Cell>> samples;

  std::size_t column(const std::string& name) const;
  // Numeric value of a cell; integers are widened, strings throw.
  double number(std::size_t row, const std::string& column_name) const;
  double summary_number(const std::string& key) const;
  // The row whose first column equals `sweep_value`.
  std::size_t row_at(double sweep_value) const;
};

}  // namespace glab
