#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tlstat/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Trimmed L-statistics: decomposition, moderate-deviation and variance experiments"};
  app.set_version_flag("--version", "tlstat 0.1.0");

  std::string command;
  std::string config;
  tlstat::cli::RunOptions opts;
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  app.add_option("command", command,
                 "identity | mdratio | variance | conditions | diagnostics | simulate")
      ->required()
      ->check(CLI::IsMember(
          {"identity", "mdratio", "variance", "conditions", "diagnostics", "simulate"}));
  app.add_option("--config", config, "JSON experiment configuration")
      ->required()
      ->envname("TLSTAT_CONFIG");
  app.add_option("--out", out_dir, "output directory for CSV files")->envname("TLSTAT_OUT");
  auto* seed_opt =
      app.add_option("--seed", seed, "base seed, overrides the config file")->envname("TLSTAT_SEED");
  app.add_option("--workers", opts.workers, "worker threads (0 = all cores)")
      ->envname("TLSTAT_WORKERS");
  app.add_flag("--ignore-conditions", opts.ignore_conditions,
               "run and judge experiments even when hypotheses are violated")
      ->envname("TLSTAT_IGNORE_CONDITIONS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tlstat::cli::kExitConfig;
  }
  if (seed_opt->count() > 0) opts.seed = seed;
  opts.out_dir = out_dir;
  return tlstat::cli::run_command(command, config, opts, std::cerr);
}
