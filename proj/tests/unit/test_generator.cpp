#include <doctest.h>

#include <cmath>
#include <vector>

#include "impactlab/errors.hpp"
#include "impactlab/friction.hpp"
#include "impactlab/generator.hpp"
#include "oracles.hpp"

using namespace impactlab;

TEST_CASE("schedules respect the volume bounds and time law") {
  ScenarioSpec spec;
  spec.n = 2000;
  spec.seed = 11;
  spec.gap_law = GapLaw::Exponential;
  spec.time_gap = 2.0;
  const OrderSchedule s = make_schedule(spec);
  REQUIRE(s.size() == 2000);
  CHECK_NOTHROW(s.validate());
  testsupport::KahanSum gaps;
  for (std::size_t k = 0; k < s.size(); ++k) {
    REQUIRE(s.volumes[k] >= spec.q_minus);
    REQUIRE(s.volumes[k] <= spec.q_plus);
    if (k > 0) {
      REQUIRE(s.times[k] > s.times[k - 1]);
      gaps.add(s.times[k] - s.times[k - 1]);
    }
  }
  CHECK(gaps.sum / 1999.0 == doctest::Approx(2.0).epsilon(0.1));

  spec.volume_law = VolumeLaw::Constant;
  for (double q : make_schedule(spec).volumes) REQUIRE(q == 1.0);
}

TEST_CASE("same seed gives the same scenario") {
  ScenarioSpec spec;
  spec.seed = 42;
  const Scenario a = gen_equilibrium(spec, ImpactKernel::power(0.5));
  const Scenario b = gen_equilibrium(spec, ImpactKernel::power(0.5));
  CHECK(a.schedule.volumes == b.schedule.volumes);
  CHECK(a.schedule.times == b.schedule.times);
  CHECK(a.path.impacts == b.path.impacts);
  spec.seed = 43;
  const Scenario c = gen_equilibrium(spec, ImpactKernel::power(0.5));
  CHECK(a.schedule.volumes != c.schedule.volumes);
}

TEST_CASE("scenario validation") {
  ScenarioSpec spec;
  spec.n = 0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = ScenarioSpec{};
  spec.q_minus = 0.0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = ScenarioSpec{};
  spec.q_plus = 0.1;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  NonEqSpec neq;
  neq.rho1 = 3.0;
  CHECK_THROWS_AS(neq.validate(), InvalidArgument);
  neq = NonEqSpec{};
  neq.growth = 1.0;
  CHECK_THROWS_AS(neq.validate(), InvalidArgument);
}

TEST_CASE("regime indices alternate on growing blocks") {
  NonEqSpec neq;
  neq.n0 = 3;
  neq.growth = 2.0;
  const std::vector<double> r = regime_indices(12, neq);
  // Blocks: [1,3) rho1, [3,6) rho2, [6,12) rho1, [12,24) rho2.
  const std::vector<double> expected{0.5, 0.5, 2.0, 2.0, 2.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 2.0};
  CHECK(r == expected);
}

TEST_CASE("non-equilibrium paths keep S_n I_n non-decreasing") {
  ScenarioSpec spec;
  spec.n = 100'000;
  spec.seed = 2;
  const Scenario sim = gen_nonequilibrium(spec, NonEqSpec{});
  const ImpactPath& p = sim.path;
  for (std::size_t k = 1; k < p.size(); ++k) {
    REQUIRE(p.impacts[k] > 0.0);
    REQUIRE(p.cumulative_sizes[k] * p.impacts[k] >= p.cumulative_sizes[k - 1] * p.impacts[k - 1]);
  }
}

TEST_CASE("equal regimes reduce to equilibrium") {
  ScenarioSpec spec;
  spec.n = 20'000;
  spec.seed = 4;
  NonEqSpec neq;
  neq.rho1 = 0.8;
  neq.rho2 = 0.8;
  const Scenario sim = gen_nonequilibrium(spec, neq);
  const FrictionAnalysis a = analyze_friction(sim.path);
  CHECK(a.converged);
  CHECK(a.limit_estimate == doctest::Approx(1.0 / 1.8).epsilon(0.01));
  // The local index of the multiplicative construction is rho exactly once unclamped.
  const std::vector<double> local = rho_local(sim.path);
  for (std::size_t k = 100; k < local.size(); ++k) REQUIRE(local[k] == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("non-equilibrium limit points straddle the two regimes") {
  ScenarioSpec spec;
  spec.n = 1'000'000;
  spec.seed = 1;
  const Scenario sim = gen_nonequilibrium(spec, NonEqSpec{});
  const LimitPoints lp = limit_points(sim.path, 0.9);
  CHECK(std::abs(lp.liminf - 1.0 / 3.0) < 0.02);
  CHECK(std::abs(lp.limsup - 2.0 / 3.0) < 0.02);
  CHECK(lp.max_gap <= 0.02);
}

TEST_CASE("divergent construction overflows past S = 709") {
  ScenarioSpec spec;
  spec.n = 200;
  spec.volume_law = VolumeLaw::Constant;
  spec.q_minus = 1.0;
  spec.q_plus = 1.0;
  const Scenario sim = gen_divergent(spec);
  CHECK(sim.path.impacts[9] == doctest::Approx(std::exp(10.0)).epsilon(1e-14));
  spec.n = 800;
  CHECK_THROWS_AS(gen_divergent(spec), KernelOverflow);
}

TEST_CASE("market volumes") {
  ScenarioSpec spec;
  spec.n = 5000;
  spec.seed = 8;
  const OrderSchedule s = make_schedule(spec);
  const MarketVolumes full = gen_volumes(s, 1.0, 3);
  CHECK(full.volumes == s.volumes);

  const MarketVolumes half = gen_volumes(s, 0.5, 3, 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) REQUIRE(half.volumes[k] == 2.0 * s.volumes[k]);

  const MarketVolumes noisy = gen_volumes(s, 0.1, 3);
  for (std::size_t k = 0; k < s.size(); ++k) REQUIRE(noisy.volumes[k] >= s.volumes[k]);
  CHECK(noisy.running_participation(s.volumes).back() == doctest::Approx(0.1).epsilon(0.01));
  CHECK(gen_volumes(s, 0.1, 3).volumes == noisy.volumes);
  CHECK_THROWS_AS(gen_volumes(s, 0.0, 3), InvalidArgument);
  CHECK_THROWS_AS(gen_volumes(s, 1.5, 3), InvalidArgument);
}
