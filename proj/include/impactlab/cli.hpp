#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "impactlab/generator.hpp"
#include "impactlab/impact_core.hpp"
#include "impactlab/relaxation.hpp"
#include "impactlab/sizes.hpp"

namespace impactlab::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalError = 3,
  kSelftestFailure = 4,
};

struct ScheduleConfig {
  ScenarioSpec spec;             // spec.seed is replaced by the run seed
  double participation = 1.0;    // target Q/V for the V column
  double volume_noise = 0.1;     // log-sd of the market volume noise
};

struct RhoLawConfig {
  std::vector<std::string> laws{"dirac", "uniform01", "exponential"};
  double dirac_lambda = 0.5;
  double exponential_lambda = 1.0;
  std::vector<double> empirical;  // samples for the "empirical" law
  std::size_t mc_samples = 100'000;
  std::size_t x_points = 100;
  double x_min = 0.01;
};

struct SizesConfig {
  double beta = 1.5;
  std::uint64_t n_max = 10'000'000;
  SizeLaw law{0.5, SizeVariant::Lower, 1.0, 2.0};
  std::size_t samples = 100'000;
  std::vector<double> nu_grid;  // empty: beta * {0.5, 0.9, 1, 1.1, 2}
  std::uint64_t hazard_max = 100'000;
};

struct RelaxConfig {
  RelaxationProfile profile;
  double std_scale = 0.2;
  std::size_t paths = 10'000;
  double horizon = 10.0;
  std::size_t points = 101;
};

struct OutputConfig {
  std::string dir = "out";
  std::size_t replicates = 1;
};

struct Config {
  std::uint64_t seed = 1;
  ScheduleConfig schedule;
  ImpactKernel kernel;
  NonEqSpec noneq;
  double noneq_tail_fraction = 0.9;  // share of the path scanned for limit points
  RhoLawConfig rho_law;
  SizesConfig sizes;
  RelaxConfig relaxation;
  OutputConfig output;
};

// INI text: optional top-level `seed`, then the sections [schedule], [kernel],
// [noneq], [rho_law], [sizes], [relaxation], [output]. '#' and ';' start
// comments anywhere on a line. Unknown sections or keys, malformed values and
// values rejected by the domain validators all throw ConfigError.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& file);

// Every field of the config in a fixed order and number format, minus the
// output location. Two configs with equal canonical text behave identically.
std::string canonical_config(const Config& config);
std::uint64_t config_hash(const Config& config);

struct RunOptions {
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
};

const std::vector<std::string>& command_names();

// Runs one command and writes its files under options.out_dir. Returns an
// ExitCode; errors are reported on `log`.
int run_command(const std::string& command, const Config& config, const RunOptions& options, std::ostream& log);

// Output directory precedence: IMPACTLAB_OUT, then --out, then [output] dir.
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag, const Config& config);

}  // namespace impactlab::cli
