#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "impactlab/errors.hpp"
#include "impactlab/parallel.hpp"
#include "impactlab/rng.hpp"

namespace impactlab::cli {
namespace {

using CommandFn = int (*)(const CommandContext&);

const std::map<std::string, CommandFn>& registry() {
  static const std::map<std::string, CommandFn> commands{
      {"simulate", cmd_simulate}, {"noneq", cmd_noneq}, {"psi", cmd_psi},
      {"sizes", cmd_sizes},       {"relax", cmd_relax}, {"selftest", cmd_selftest},
  };
  return commands;
}

int guarded(CommandFn fn, const CommandContext& ctx) {
  try {
    return fn(ctx);
  } catch (const ConfigError& e) {
    ctx.log << "impactlab: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    ctx.log << "impactlab: invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    ctx.log << "impactlab: numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate", "noneq", "psi", "sizes", "relax", "selftest"};
  return names;
}

int run_command(const std::string& command, const Config& config, const RunOptions& options, std::ostream& log) {
  const auto it = registry().find(command);
  if (it == registry().end()) {
    log << "impactlab: unknown command '" << command << "'\n";
    return kConfigError;
  }
  const std::uint64_t hash = config_hash(config);
  const std::size_t replicates = config.output.replicates;
  if (replicates == 1) {
    CommandContext ctx{config, {command, hash, config.seed}, options.out_dir, options.jobs, log};
    return guarded(it->second, ctx);
  }

  // Independent scenarios: per-replicate seeds and directories, logs buffered
  // and flushed in replicate order.
  std::vector<int> codes(replicates, kOk);
  std::vector<std::ostringstream> logs(replicates);
  parallel_for(replicates, options.jobs, [&](std::size_t r) {
    char name[32];
    std::snprintf(name, sizeof name, "rep_%03zu", r);
    CommandContext ctx{config, {command, hash, derive_seed(config.seed, r)}, options.out_dir / name, 1, logs[r]};
    codes[r] = guarded(it->second, ctx);
  });
  int worst = kOk;
  for (std::size_t r = 0; r < replicates; ++r) {
    log << logs[r].str();
    worst = std::max(worst, codes[r]);
  }
  return worst;
}

}  // namespace impactlab::cli
