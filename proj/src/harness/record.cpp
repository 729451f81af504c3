#include "glab/harness/record.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glab/errors.hpp"

namespace glab {

Aggregate aggregate(std::span<const double> samples) {
  Aggregate a;
  a.n = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) {
    a.mean = std::numeric_limits<double>::quiet_NaN();
    a.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return a;
  }
  double sum = 0.0;
  for (const double x : samples) sum += x;
  a.mean = sum / static_cast<double>(a.n);
  if (a.n < 2) {
    a.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return a;
  }
  double ss = 0.0;
  for (const double x : samples) ss += (x - a.mean) * (x - a.mean);
  a.stderr_ = std::sqrt(ss / static_cast<double>(a.n - 1)) / std::sqrt(static_cast<double>(a.n));
  return a;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::size_t ExperimentRecord::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("record has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

namespace {

double as_number(const Cell& cell, const std::string& what) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw InvalidArgument("'" + what + "' is not numeric");
}

}  // namespace

double ExperimentRecord::number(std::size_t row, const std::string& column_name) const {
  if (row >= rows.size()) throw InvalidArgument("record row out of range");
  return as_number(rows[row][column(column_name)], column_name);
}

double ExperimentRecord::summary_number(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return as_number(v, key);
  }
  throw InvalidArgument("record has no summary entry '" + key + "'");
}

std::size_t ExperimentRecord::row_at(double sweep_value) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (as_number(rows[i].front(), columns.front()) == sweep_value) return i;
  }
  throw InvalidArgument("record has no row for sweep value " + std::to_string(sweep_value));
}

}  // namespace glab
