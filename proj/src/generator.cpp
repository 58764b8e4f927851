#include "impactlab/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "impactlab/errors.hpp"
#include "impactlab/numeric.hpp"
#include "impactlab/rng.hpp"

namespace impactlab {
namespace {

constexpr std::uint64_t kVolumeStream = 0;
constexpr std::uint64_t kTimeStream = 1;
constexpr double kClampedStep = 0.4;

}  // namespace

void ScenarioSpec::validate() const {
  if (n < 1) throw InvalidArgument("scenario needs n >= 1");
  if (!(q_minus > 0.0) || !(q_plus >= q_minus) || !std::isfinite(q_plus)) {
    throw InvalidArgument("scenario needs 0 < q_minus <= q_plus < inf");
  }
  if (!(time_gap > 0.0) || !std::isfinite(time_gap)) throw InvalidArgument("time gap must be positive");
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  if (!(start_price > 0.0)) throw InvalidArgument("start price must be positive");
}

void NonEqSpec::validate() const {
  if (!(rho1 >= 0.0) || !std::isfinite(rho2)) throw InvalidArgument("regime indices must be finite and >= 0");
  if (rho1 > rho2) throw InvalidArgument("non-equilibrium spec needs rho1 <= rho2");
  if (n0 < 1) throw InvalidArgument("initial block length must be >= 1");
  if (!(growth > 1.0)) throw InvalidArgument("block growth must exceed 1");
}

OrderSchedule make_schedule(const ScenarioSpec& spec) {
  spec.validate();
  OrderSchedule schedule;
  schedule.sign = spec.sign;
  schedule.start_price = spec.start_price;
  schedule.q_minus = spec.q_minus;
  schedule.q_plus = spec.q_plus;
  schedule.volumes.resize(spec.n);
  schedule.times.resize(spec.n);

  Rng volume_rng = make_rng(spec.seed, kVolumeStream);
  const double width = spec.q_plus - spec.q_minus;
  for (double& q : schedule.volumes) {
    if (spec.volume_law == VolumeLaw::Constant || width == 0.0) {
      q = 0.5 * (spec.q_minus + spec.q_plus);
    } else {
      q = std::min(spec.q_plus, spec.q_minus + width * uniform01(volume_rng));
    }
  }

  Rng time_rng = make_rng(spec.seed, kTimeStream);
  std::exponential_distribution<double> gap(1.0 / spec.time_gap);
  double t = 0.0;
  for (std::size_t k = 0; k < spec.n; ++k) {
    schedule.times[k] = t;
    double step = spec.time_gap;
    if (spec.gap_law == GapLaw::Exponential) {
      do {
        step = gap(time_rng);
      } while (!(step > 0.0));
    }
    t += step;
  }
  return schedule;
}

Scenario gen_equilibrium(const ScenarioSpec& spec, const ImpactKernel& kernel) {
  Scenario scenario;
  scenario.schedule = make_schedule(spec);
  scenario.path = impact_path(scenario.schedule, kernel);
  return scenario;
}

std::vector<double> regime_indices(std::size_t count, const NonEqSpec& neq) {
  neq.validate();
  std::vector<double> rho(count);
  std::size_t block_end = neq.n0;  // exclusive, 1-based
  bool first_regime = true;
  for (std::size_t n = 1; n <= count; ++n) {
    while (n >= block_end) {
      first_regime = !first_regime;
      const auto next = static_cast<std::size_t>(std::ceil(neq.growth * static_cast<double>(block_end)));
      block_end = std::max(next, block_end + 1);
    }
    rho[n - 1] = first_regime ? neq.rho1 : neq.rho2;
  }
  return rho;
}

Scenario gen_nonequilibrium(const ScenarioSpec& spec, const NonEqSpec& neq) {
  Scenario scenario;
  scenario.schedule = make_schedule(spec);
  const std::vector<double>& q = scenario.schedule.volumes;
  const std::vector<double> sizes = scenario.schedule.cumulative_sizes();
  const std::vector<double> rho = regime_indices(q.size(), neq);

  std::vector<double> impacts(q.size());
  impacts[0] = std::pow(q[0], rho[0]);
  for (std::size_t k = 1; k < q.size(); ++k) {
    double step = rho[k] * q[k] / sizes[k];
    if (step >= 0.5) step = kClampedStep;
    impacts[k] = impacts[k - 1] / (1.0 - step);
    if (!std::isfinite(impacts[k])) throw KernelOverflow("non-equilibrium impact overflowed");
  }
  scenario.path = make_path(q, impacts);
  return scenario;
}

Scenario gen_divergent(const ScenarioSpec& spec) {
  Scenario scenario;
  scenario.schedule = make_schedule(spec);
  const std::vector<double> sizes = scenario.schedule.cumulative_sizes();
  std::vector<double> impacts(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    impacts[k] = std::exp(sizes[k]);
    if (!std::isfinite(impacts[k])) throw KernelOverflow("exp(S_n) overflowed; shorten the schedule");
  }
  scenario.path = make_path(scenario.schedule.volumes, impacts);
  return scenario;
}

MarketVolumes gen_volumes(const OrderSchedule& schedule, double participation, std::uint64_t seed,
                          double noise_sigma) {
  if (!(participation > 0.0 && participation <= 1.0)) {
    throw InvalidArgument("participation must be in (0, 1]");
  }
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("volume noise must be non-negative");
  MarketVolumes market;
  market.participation = participation;
  market.volumes.resize(schedule.size());
  const bool deterministic = participation == 1.0 || noise_sigma == 0.0;
  Rng rng(derive_seed(seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const double q = schedule.volumes[k];
    double v = q / participation;
    if (!deterministic) {
      v *= std::exp(noise_sigma * normal(rng) - 0.5 * noise_sigma * noise_sigma);
    }
    market.volumes[k] = std::max(v, q);
  }
  return market;
}

}  // namespace impactlab
