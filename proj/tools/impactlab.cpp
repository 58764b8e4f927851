#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "impactlab/cli.hpp"
#include "impactlab/errors.hpp"

int main(int argc, char** argv) {
  using namespace impactlab::cli;

  CLI::App app{"impactlab: metaorder impact equilibrium simulations"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::size_t jobs = 1;
  app.add_option("--config", config_file, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--out", out, "Output directory (IMPACTLAB_OUT takes precedence)");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  app.add_subcommand("simulate", "Equilibrium path, friction analysis and rho estimates");
  app.add_subcommand("noneq", "Two-regime sawtooth path and limit-point report");
  app.add_subcommand("psi", "Averaged impact function psi: closed forms vs Monte Carlo");
  app.add_subcommand("sizes", "Metaorder length and size laws");
  app.add_subcommand("relax", "Relaxation, fair pricing time and residual impact");
  app.add_subcommand("selftest", "Run the oracle self-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  Config config;
  try {
    if (!config_file.empty()) config = load_config(config_file);
    if (seed) config.seed = *seed;
  } catch (const impactlab::ConfigError& e) {
    std::cerr << "impactlab: config error: " << e.what() << "\n";
    return kConfigError;
  }

  RunOptions options;
  options.out_dir = resolve_out_dir(out, config);
  options.jobs = jobs;
  const std::string command = app.get_subcommands().front()->get_name();
  return run_command(command, config, options, command == "selftest" ? std::cout : std::cerr);
}
