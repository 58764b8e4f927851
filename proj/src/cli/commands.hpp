#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "impactlab/cli.hpp"
#include "output.hpp"

namespace impactlab::cli {

struct CommandContext {
  const Config& config;
  RunHeader header;
  std::filesystem::path dir;
  std::size_t jobs = 1;
  std::ostream& log;
};

int cmd_simulate(const CommandContext& ctx);
int cmd_noneq(const CommandContext& ctx);
int cmd_psi(const CommandContext& ctx);
int cmd_sizes(const CommandContext& ctx);
int cmd_relax(const CommandContext& ctx);
int cmd_selftest(const CommandContext& ctx);

}  // namespace impactlab::cli
