#include "glab/harness/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "glab/errors.hpp"

namespace glab {
namespace {

using nlohmann::json;

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

// Non-finite doubles have no JSON spelling; store them as strings.
json number_json(double x) { return std::isfinite(x) ? json(x) : json(format_number(x)); }

json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return number_json(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<std::string>(cell);
}

json config_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = std::string(to_string(cfg.kind));
  j["name"] = cfg.stem();
  j["seed"] = cfg.master_seed;
  j["realizations"] = cfg.n_realizations;
  j["window_fraction"] = cfg.window_fraction;
  j["memory_cap"] = cfg.memory_cap;
  j["jobs"] = cfg.jobs;
  j["output"] = cfg.output_dir;
  j["sweep"] = {{"variable", cfg.sweep_variable}, {"values", cfg.sweep_values}};
  json model;
  switch (cfg.kind) {
    case ExperimentKind::ChainSpectrum:
    case ExperimentKind::SwStep:
    case ExperimentKind::Percolation1d:
      model = {{"n_sites", cfg.chain.n_sites},
               {"gamma", cfg.chain.gamma},
               {"h_bounds", interval_json(cfg.chain.h_bounds)},
               {"Gamma_bounds", interval_json(cfg.chain.Gamma_bounds)},
               {"J_bounds", interval_json(cfg.chain.J_bounds)}};
      break;
    case ExperimentKind::BathLiomSweep:
    case ExperimentKind::DistanceSweep:
      model = {{"n_bath", cfg.bath.n_bath}, {"n_loc", cfg.bath.n_loc},  {"J0", cfg.bath.J0},
               {"alpha", cfg.bath.alpha},   {"W_Gf", cfg.bath.W_Gf},    {"h_bounds", interval_json(cfg.bath.h_bounds)}};
      break;
    case ExperimentKind::Criteria:
      model = {{"gamma", cfg.criteria.gamma}, {"L", cfg.criteria.L},         {"d", cfg.criteria.d},
               {"r", cfg.criteria.r},         {"J0", cfg.criteria.J0},       {"alpha", cfg.criteria.alpha},
               {"W_Gf", cfg.criteria.W_Gf},   {"n_bath", cfg.criteria.n_bath}};
      break;
  }
  j["model"] = model;
  if (cfg.kind == ExperimentKind::SwStep) j["sw"] = {{"schedule", cfg.sw.schedule}, {"steps", cfg.sw.steps}};
  return j;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const ExperimentRecord& record) {
  std::ostringstream out;
  for (std::size_t c = 0; c < record.columns.size(); ++c) {
    out << (c ? "," : "") << record.columns[c];
  }
  out << '\n';
  for (const auto& row : record.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (const auto* d = std::get_if<double>(&row[c])) {
        out << format_number(*d);
      } else if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
        out << *i;
      } else {
        out << std::get<std::string>(row[c]);
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const ExperimentRecord& record) {
  json j;
  j["config"] = config_json(record.config);
  j["columns"] = record.columns;
  json seeds = json::array();
  for (const auto& s : record.seeds) {
    seeds.push_back({{"realization", s.realization}, {"disorder", s.disorder}, {"probe", s.probe}});
  }
  j["seeds"] = seeds;
  json skips = json::array();
  for (const auto& s : record.skips) {
    skips.push_back({{"realization", s.realization}, {"sweep_value", number_json(s.sweep_value)}, {"reason", s.reason}});
  }
  j["skips"] = skips;
  json summary = json::object();
  for (const auto& [k, v] : record.summary) summary[k] = cell_json(v);
  j["summary"] = summary;
  if (!record.sample_columns.empty()) {
    json rows = json::array();
    for (const auto& row : record.samples) {
      json r = json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      rows.push_back(r);
    }
    j["samples"] = {{"columns", record.sample_columns}, {"rows", rows}};
  }
  return j.dump(2) + "\n";
}

OutputPaths write_record(const ExperimentRecord& record, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  OutputPaths paths{dir / (record.config.stem() + ".csv"), dir / (record.config.stem() + ".json")};
  const auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw Error("cannot write '" + p.string() + "'");
  };
  write(paths.csv, to_csv(record));
  write(paths.json, to_json(record));
  return paths;
}

}  // namespace glab
