#include "glab/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "glab/errors.hpp"

namespace glab {
namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 6> kKindNames{{
    {ExperimentKind::ChainSpectrum, "chain-spectrum"},
    {ExperimentKind::BathLiomSweep, "bath-liom-sweep"},
    {ExperimentKind::DistanceSweep, "distance-sweep"},
    {ExperimentKind::SwStep, "sw-step"},
    {ExperimentKind::Percolation1d, "percolation-1d"},
    {ExperimentKind::Criteria, "criteria"},
}};

bool uses_chain(ExperimentKind k) {
  return k == ExperimentKind::ChainSpectrum || k == ExperimentKind::SwStep ||
         k == ExperimentKind::Percolation1d;
}

bool uses_bath(ExperimentKind k) {
  return k == ExperimentKind::BathLiomSweep || k == ExperimentKind::DistanceSweep;
}

bool is_integer_variable(std::string_view v) { return v == "n_loc" || v == "n_sites" || v == "distance"; }

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void reject_unknown(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) fail(where + ": expected a mapping");
  std::set<std::string> seen;
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(where + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(where + ": duplicate key '" + key + "'");
  }
}

template <typename T>
T read(const YAML::Node& node, const std::string& key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    fail("bad value for '" + key + "'");
  }
}

Interval read_interval(const YAML::Node& node, const std::string& key, Interval fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  if (!v.IsSequence() || v.size() != 2) fail("'" + key + "' must be a two-element list [lo, hi]");
  try {
    return {v[0].as<double>(), v[1].as<double>()};
  } catch (const YAML::Exception&) {
    fail("bad value for '" + key + "'");
  }
}

void read_model(const YAML::Node& m, ExperimentConfig& cfg) {
  if (uses_chain(cfg.kind)) {
    reject_unknown(m, {"n_sites", "gamma", "h_bounds", "Gamma_bounds", "J_bounds"}, "model");
    auto& c = cfg.chain;
    c.n_sites = read(m, "n_sites", c.n_sites);
    c.gamma = read(m, "gamma", c.gamma);
    c.h_bounds = read_interval(m, "h_bounds", c.h_bounds);
    c.Gamma_bounds = read_interval(m, "Gamma_bounds", c.Gamma_bounds);
    c.J_bounds = read_interval(m, "J_bounds", c.J_bounds);
  } else if (uses_bath(cfg.kind)) {
    reject_unknown(m, {"n_bath", "n_loc", "J0", "alpha", "W_Gf", "h_bounds"}, "model");
    auto& b = cfg.bath;
    b.n_bath = read(m, "n_bath", b.n_bath);
    b.n_loc = read(m, "n_loc", b.n_loc);
    b.J0 = read(m, "J0", b.J0);
    b.alpha = read(m, "alpha", b.alpha);
    b.W_Gf = read(m, "W_Gf", b.W_Gf);
    b.h_bounds = read_interval(m, "h_bounds", b.h_bounds);
  } else {
    reject_unknown(m, {"gamma", "L", "d", "r", "J0", "alpha", "W_Gf", "n_bath"}, "model");
    auto& c = cfg.criteria;
    c.gamma = read(m, "gamma", c.gamma);
    c.L = read(m, "L", c.L);
    c.d = read(m, "d", c.d);
    c.r = read(m, "r", c.r);
    c.J0 = read(m, "J0", c.J0);
    c.alpha = read(m, "alpha", c.alpha);
    c.W_Gf = read(m, "W_Gf", c.W_Gf);
    c.n_bath = read(m, "n_bath", c.n_bath);
  }
}

double current_value(const ExperimentConfig& cfg, std::string_view v) {
  const auto& c = cfg.criteria;
  if (v == "gamma") return c.gamma;
  if (v == "alpha") return c.alpha;
  if (v == "r") return c.r;
  if (v == "L") return c.L;
  if (v == "J0") return c.J0;
  return c.W_Gf;
}

void validate_point(const ExperimentConfig& cfg) {
  try {
    if (uses_bath(cfg.kind)) {
      cfg.bath.validate(cfg.memory_cap);
    } else if (uses_chain(cfg.kind)) {
      cfg.chain.validate();
      if (cfg.kind != ExperimentKind::Percolation1d) {
        if (cfg.chain.n_sites >= 63 || (Index{1} << cfg.chain.n_sites) > cfg.memory_cap) {
          throw CapacityError("chain of " + std::to_string(cfg.chain.n_sites) +
                              " sites exceeds the memory cap of " + std::to_string(cfg.memory_cap));
        }
      }
    } else {
      const auto& c = cfg.criteria;
      if (!(c.gamma > 0.0 && c.gamma < 1.0)) fail("criteria: gamma must lie in (0, 1)");
      if (!(c.L >= 1.0) || c.d < 1 || !(c.r >= 0.0)) fail("criteria: need L >= 1, d >= 1, r >= 0");
      if (!(c.J0 > 0.0) || !(c.alpha > 0.0) || !(c.W_Gf > 0.0) || c.n_bath < 0 || c.n_bath > 60) {
        fail("criteria: need J0, alpha, W_Gf > 0 and 0 <= n_bath <= 60");
      }
    }
  } catch (const CapacityError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::vector<std::string_view> sweep_variables(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ChainSpectrum:
      return {"gamma", "n_sites"};
    case ExperimentKind::BathLiomSweep:
      return {"n_loc"};
    case ExperimentKind::DistanceSweep:
      return {"distance"};
    case ExperimentKind::SwStep:
      return {"gamma"};
    case ExperimentKind::Percolation1d:
      return {"epsilon"};
    case ExperimentKind::Criteria:
      return {"gamma", "alpha", "r", "L", "J0", "W_Gf"};
  }
  return {};
}

void apply_sweep_value(ExperimentConfig& cfg, double value) {
  const std::string& v = cfg.sweep_variable;
  if (v == "n_loc") {
    cfg.bath.n_loc = static_cast<int>(value);
  } else if (v == "n_sites") {
    cfg.chain.n_sites = static_cast<int>(value);
  } else if (v == "gamma" && cfg.kind == ExperimentKind::Criteria) {
    cfg.criteria.gamma = value;
  } else if (v == "gamma") {
    cfg.chain.gamma = value;
  } else if (v == "alpha") {
    cfg.criteria.alpha = value;
  } else if (v == "r") {
    cfg.criteria.r = value;
  } else if (v == "L") {
    cfg.criteria.L = value;
  } else if (v == "J0") {
    cfg.criteria.J0 = value;
  } else if (v == "W_Gf") {
    cfg.criteria.W_Gf = value;
  }
}

void ExperimentConfig::validate() const {
  if (n_realizations < 1) fail("realizations must be >= 1");
  if (jobs < 1) fail("jobs must be >= 1");
  if (memory_cap < 1) fail("memory_cap must be >= 1");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) fail("window_fraction must lie in (0, 1]");
  if (output_dir.empty()) fail("output directory must not be empty");
  if (name.find('/') != std::string::npos) fail("name must not contain '/'");

  const auto allowed = sweep_variables(kind);
  if (std::find(allowed.begin(), allowed.end(), sweep_variable) == allowed.end()) {
    fail("sweep variable '" + sweep_variable + "' is not valid for " + std::string(to_string(kind)));
  }
  if (sweep_values.empty()) fail("sweep values must not be empty");
  for (const double v : sweep_values) {
    if (!std::isfinite(v)) fail("sweep values must be finite");
    if (is_integer_variable(sweep_variable) && v != std::floor(v)) {
      fail("sweep variable '" + sweep_variable + "' takes integer values");
    }
  }

  if (kind == ExperimentKind::SwStep) {
    if (sw.steps < 1) fail("sw.steps must be >= 1");
    for (std::size_t k = 0; k < sw.schedule.size(); ++k) {
      if (!(sw.schedule[k] > 0.0)) fail("sw.schedule entries must be positive");
      if (k > 0 && sw.schedule[k] > sw.schedule[k - 1]) fail("sw.schedule must be non-increasing");
    }
  }

  for (const double v : sweep_values) {
    ExperimentConfig point = *this;
    apply_sweep_value(point, v);
    if (sweep_variable == "distance" && (v < 0 || v > bath.n_loc)) {
      fail("distance must lie in [0, n_loc]");
    }
    if (sweep_variable == "epsilon" && !(v > 0.0)) fail("epsilon must be positive");
    if (kind == ExperimentKind::SwStep && !(point.chain.gamma > 0.0)) {
      // gamma = 0 is allowed: the run converges before the first rotation.
    }
    validate_point(point);
  }
}

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    fail(std::string("cannot parse config: ") + e.what());
  }
  if (!root.IsMap()) fail("config must be a mapping");
  reject_unknown(root,
                 {"experiment", "name", "seed", "realizations", "window_fraction", "memory_cap", "jobs",
                  "output", "model", "sweep", "sw"},
                 "config");

  ExperimentConfig cfg;
  const auto kind_name = read<std::string>(root, "experiment", "");
  if (kind_name.empty()) fail("config: missing 'experiment'");
  const auto kind = parse_experiment_kind(kind_name);
  if (!kind) fail("config: unknown experiment '" + kind_name + "'");
  cfg.kind = *kind;

  cfg.name = read<std::string>(root, "name", "");
  cfg.master_seed = read<std::uint64_t>(root, "seed", 0);
  cfg.n_realizations = read(root, "realizations", 1);
  cfg.window_fraction = read(root, "window_fraction", 0.2);
  cfg.memory_cap = read<Index>(root, "memory_cap", kDefaultDimensionCap);
  cfg.jobs = read(root, "jobs", 1);
  cfg.output_dir = read<std::string>(root, "output", ".");

  if (root["model"]) read_model(root["model"], cfg);

  if (const YAML::Node sw = root["sw"]) {
    if (cfg.kind != ExperimentKind::SwStep) fail("config: 'sw' only applies to sw-step");
    reject_unknown(sw, {"schedule", "steps"}, "sw");
    cfg.sw.schedule = read(sw, "schedule", std::vector<double>{});
    cfg.sw.steps = read(sw, "steps", cfg.sw.steps);
  }

  cfg.sweep_variable = std::string(sweep_variables(cfg.kind).front());
  if (const YAML::Node sweep = root["sweep"]) {
    reject_unknown(sweep, {"variable", "values"}, "sweep");
    cfg.sweep_variable = read(sweep, "variable", cfg.sweep_variable);
    cfg.sweep_values = read(sweep, "values", std::vector<double>{});
  }
  if (cfg.sweep_values.empty()) {
    // Single-point defaults; the other experiments need an explicit list.
    if (cfg.kind == ExperimentKind::DistanceSweep) {
      for (int i = 0; i <= cfg.bath.n_loc; ++i) cfg.sweep_values.push_back(i);
    } else if (cfg.kind == ExperimentKind::Criteria) {
      cfg.sweep_values.push_back(current_value(cfg, cfg.sweep_variable));
    } else if (cfg.kind == ExperimentKind::SwStep) {
      cfg.sweep_values.push_back(cfg.chain.gamma);
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace glab
