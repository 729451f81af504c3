// glab: run one experiment described by a YAML config and write its CSV and
// JSON sidecar.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "glab/errors.hpp"
#include "glab/harness/config.hpp"
#include "glab/harness/experiments.hpp"
#include "glab/harness/output.hpp"

namespace {

// 1 covers bad command lines and I/O failures.
enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kCapacity = 3, kNumerical = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Griffiths-region exact-diagonalization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
  bool quiet = false;

  for (const auto* name : {"chain-spectrum", "bath-liom-sweep", "distance-sweep", "sw-step", "percolation-1d",
                           "criteria"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (YAML)")->required();
    sub->add_option("--seed", seed, "override the master seed");
    sub->add_option("--out", out_dir, "override the output directory");
    sub->add_option("--jobs", jobs, "worker threads");
    sub->add_flag("-q,--quiet", quiet, "no progress on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    glab::ExperimentConfig cfg = glab::load_config(config_path);
    if (glab::to_string(cfg.kind) != subcommand) {
      throw glab::ConfigError("config describes '" + std::string(glab::to_string(cfg.kind)) +
                              "' but the subcommand is '" + subcommand + "'");
    }
    if (seed) cfg.master_seed = *seed;
    if (out_dir) cfg.output_dir = *out_dir;
    if (jobs) cfg.jobs = *jobs;
    cfg.validate();

    glab::EvaluationCache cache;
    glab::RunContext ctx;
    ctx.cache = &cache;
    if (!quiet) ctx.progress = [](const std::string& msg) { std::cerr << msg << '\n'; };

    const glab::ExperimentRecord record = glab::run_experiment(cfg, ctx);
    const auto paths = glab::write_record(record, cfg.output_dir);
    std::cout << paths.csv.string() << '\n' << paths.json.string() << '\n';
    if (!record.skips.empty()) {
      std::cerr << record.skips.size() << " realization(s) skipped; see the JSON sidecar\n";
    }
    return kOk;
  } catch (const glab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const glab::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const glab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const glab::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
