#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "impactlab/impact_core.hpp"

namespace impactlab {

enum class VolumeLaw { Uniform, Constant };
enum class GapLaw { Fixed, Exponential };

struct ScenarioSpec {
  std::size_t n = 10'000;
  double q_minus = 0.5;
  double q_plus = 1.5;
  VolumeLaw volume_law = VolumeLaw::Uniform;  // Constant uses (q_minus + q_plus) / 2
  GapLaw gap_law = GapLaw::Fixed;
  double time_gap = 1.0;  // fixed gap, or mean gap of the exponential law
  std::uint64_t seed = 0;
  int sign = 1;
  double start_price = 100.0;

  void validate() const;
};

// Two liquidity-provider regimes alternating on geometrically growing blocks
// [n_j, n_{j+1}), n_{j+1} = ceil(growth * n_j). The first block [1, n0) uses
// rho1.
struct NonEqSpec {
  double rho1 = 0.5;
  double rho2 = 2.0;
  std::size_t n0 = 30;
  double growth = 8.0;

  void validate() const;
};

struct Scenario {
  OrderSchedule schedule;
  ImpactPath path;
};

OrderSchedule make_schedule(const ScenarioSpec& spec);

Scenario gen_equilibrium(const ScenarioSpec& spec, const ImpactKernel& kernel);

// rho(n) for n = 1..count under the block schedule (before any clamping).
std::vector<double> regime_indices(std::size_t count, const NonEqSpec& neq);

// Impacts built multiplicatively, I_n = I_{n-1} / (1 - rho(n) Q_n / S_n),
// starting from I_1 = Q_1^rho(1). While rho(n) Q_n / S_n >= 1/2 the step
// factor is clamped to 0.4 so the recursion stays positive.
Scenario gen_nonequilibrium(const ScenarioSpec& spec, const NonEqSpec& neq);

// I_n = exp(S_n): the divergent (rho = +infinity) construction. Throws
// KernelOverflow once S_n leaves the double range (about 709).
Scenario gen_divergent(const ScenarioSpec& spec);

// V_k = Q_k / participation times mean-one lognormal noise (log-sd
// noise_sigma), floored at Q_k. participation == 1 or noise_sigma == 0 gives
// the deterministic filling V_k = Q_k / participation.
MarketVolumes gen_volumes(const OrderSchedule& schedule, double participation, std::uint64_t seed,
                          double noise_sigma = 0.1);

}  // namespace impactlab
