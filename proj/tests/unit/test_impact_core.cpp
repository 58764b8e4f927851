#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "impactlab/errors.hpp"
#include "impactlab/generator.hpp"
#include "impactlab/impact_core.hpp"
#include "oracles.hpp"

using namespace impactlab;

namespace {

ImpactKernel log_decay_kernel(double rho, double b, double p = 1.0) {
  ImpactKernel k = ImpactKernel::power(rho);
  k.theta = ThetaSpec::log_decay(b, p);
  return k;
}

OrderSchedule unit_schedule(std::size_t n) {
  OrderSchedule s;
  s.volumes.assign(n, 1.0);
  s.times.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.times[k] = static_cast<double>(k);
  return s;
}

}  // namespace

TEST_CASE("eval_kernel reference values") {
  CHECK(eval_kernel(ImpactKernel::power(0.5), 4.0) == 2.0);

  ImpactKernel constant = ImpactKernel::power(0.0);
  constant.eta.kappa = 1.0;
  CHECK(eval_kernel(constant, 100.0) == doctest::Approx(std::numbers::e).epsilon(1e-15));

  // int_1^e 0.1 / ((1 + log u) u) du by a fine trapezoid rule.
  const double integral = testsupport::trapezoid(
      [](double u) { return 0.1 / ((1.0 + std::log(u)) * u); }, 1.0, std::numbers::e, 2'000'000);
  CHECK(integral == doctest::Approx(0.1 * std::numbers::ln2).epsilon(1e-10));
  const ImpactKernel k = log_decay_kernel(0.5, 0.1);
  CHECK(theta_integral(k, std::numbers::e) == doctest::Approx(integral).epsilon(1e-10));
  const double f = eval_kernel(k, std::numbers::e);
  CHECK(f == doctest::Approx(std::exp(0.5 + integral)).epsilon(1e-12));
  CHECK(f == doctest::Approx(1.767).epsilon(1e-3));
}

TEST_CASE("custom theta goes through adaptive quadrature and matches the closed form") {
  ImpactKernel closed = log_decay_kernel(0.5, 0.1, 1.5);
  ImpactKernel custom = ImpactKernel::power(0.5);
  custom.theta = ThetaSpec::from_function([](double u) { return 0.1 * std::pow(1.0 + std::log(u), -1.5); });
  for (double x : {0.5, 1.0, 2.0, 10.0, 1e3, 1e6}) {
    CAPTURE(x);
    CHECK(eval_kernel(custom, x) == doctest::Approx(eval_kernel(closed, x)).epsilon(1e-10));
  }
  std::vector<double> xs{0.5, 1.5, 3.0, 30.0, 3e4};
  const std::vector<double> seq = eval_kernel_sequence(custom, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(seq[i] == doctest::Approx(eval_kernel(closed, xs[i])).epsilon(1e-10));
  }
}

TEST_CASE("eta family converges to kappa") {
  ImpactKernel k = ImpactKernel::power(0.0);
  k.eta = {0.2, 0.5, 1.0};
  CHECK(k.eta(0.5) == doctest::Approx(0.7));
  CHECK(k.eta(1.0) == doctest::Approx(0.7));
  CHECK(k.eta(1e300) == doctest::Approx(0.2).epsilon(1e-2));
  CHECK(eval_kernel(k, 0.5) == doctest::Approx(std::exp(0.7)));
}

TEST_CASE("eval_kernel errors") {
  CHECK_THROWS_AS(eval_kernel(ImpactKernel::power(0.5), 0.0), DomainError);
  CHECK_THROWS_AS(eval_kernel(ImpactKernel::power(0.5), -1.0), DomainError);
  CHECK_THROWS_AS(eval_kernel(ImpactKernel::power(400.0), 1e10), KernelOverflow);
  ImpactKernel bad = log_decay_kernel(0.5, 0.1);
  bad.u0 = 0.2;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  ImpactKernel negative = ImpactKernel::power(-0.1);
  CHECK_THROWS_AS(negative.validate(), InvalidArgument);
}

TEST_CASE("impact_path reference paths") {
  const ImpactPath linear = impact_path(unit_schedule(10), ImpactKernel::power(1.0));
  CHECK(linear.impacts.back() == 10.0);
  CHECK(linear.avg_impacts.back() == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(linear.friction.back() == doctest::Approx(0.55).epsilon(1e-15));

  ImpactKernel constant = ImpactKernel::power(0.0);
  constant.eta.kappa = 0.3;
  const ImpactPath flat = impact_path(unit_schedule(50), constant);
  for (double r : flat.friction) CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t k = 1; k < flat.size(); ++k) CHECK(flat.increments[k] == 0.0);
}

TEST_CASE("path invariants on generated paths") {
  for (double rho : {0.0, 0.5, 1.0, 2.0}) {
    for (double b : {0.0, 0.1}) {
      ScenarioSpec spec;
      spec.n = 5000;
      spec.seed = 3;
      const Scenario sim = gen_equilibrium(spec, log_decay_kernel(rho, b));
      const ImpactPath& p = sim.path;
      testsupport::KahanSum weighted;
      testsupport::KahanSum partial;
      double worst_identity = 0.0;
      double worst_telescope = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        weighted.add(p.volumes[k] * p.impacts[k]);
        partial.add(p.increments[k]);
        worst_identity = std::max(worst_identity,
                                  std::abs(p.avg_impacts[k] * p.cumulative_sizes[k] - weighted.sum) / weighted.sum);
        worst_telescope = std::max(worst_telescope, std::abs(partial.sum - p.impacts[k]) / p.impacts[k]);
        REQUIRE(p.friction[k] == doctest::Approx(p.avg_impacts[k] / p.impacts[k]).epsilon(1e-15));
      }
      CAPTURE(rho);
      CAPTURE(b);
      CHECK(worst_identity < 1e-12);
      CHECK(worst_telescope < 1e-12);
      CHECK(p.increments.front() == p.impacts.front());
    }
  }
}

TEST_CASE("incremental impacts telescope") {
  std::vector<double> q{1.0, 1.0, 1.0};
  std::vector<double> impacts{1.0, 3.0, 6.0};
  const ImpactPath p = make_path(q, impacts);
  CHECK(incremental_impacts(p) == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("impact per share follows rho I_n / S_n") {
  const ImpactPath p = impact_path(unit_schedule(10'000), ImpactKernel::power(0.5));
  const std::size_t n = p.size() - 1;
  const double per_share = p.increments[n] / p.volumes[n];
  CHECK(per_share / (0.5 * p.impacts[n] / p.cumulative_sizes[n]) == doctest::Approx(1.0).epsilon(1e-4));

  ScenarioSpec spec;
  spec.seed = 5;
  const Scenario sim = gen_equilibrium(spec, log_decay_kernel(0.5, 0.01));
  const ImpactPath& s = sim.path;
  const std::size_t m = s.size() - 1;
  const double ratio = (s.increments[m] / s.impacts[m]) / (0.5 * s.volumes[m] / s.cumulative_sizes[m]);
  CHECK(std::abs(ratio - 1.0) < 0.05);
}

TEST_CASE("power envelopes and log impact") {
  ScenarioSpec spec;
  spec.seed = 9;
  const double rho = 0.7;
  const Scenario sim = gen_equilibrium(spec, ImpactKernel::power(rho));
  const ImpactPath& p = sim.path;
  const std::size_t burn_in = 10;
  for (std::size_t k = burn_in + 1; k < p.size(); ++k) {
    const double s0 = p.cumulative_sizes[k - 1];
    const double s1 = p.cumulative_sizes[k];
    REQUIRE(std::pow(s1, -(rho - 0.1)) * p.impacts[k] > std::pow(s0, -(rho - 0.1)) * p.impacts[k - 1]);
    REQUIRE(std::pow(s1, -(rho + 0.1)) * p.impacts[k] < std::pow(s0, -(rho + 0.1)) * p.impacts[k - 1]);
  }
  for (double b : {0.0, 0.01}) {
    const Scenario s2 = gen_equilibrium(spec, log_decay_kernel(0.5, b));
    for (std::size_t k = 0; k < s2.path.size(); ++k) {
      if (s2.path.cumulative_sizes[k] < 1e4) continue;
      REQUIRE(std::log(s2.path.impacts[k]) / (0.5 * std::log(s2.path.cumulative_sizes[k])) ==
              doctest::Approx(1.0).epsilon(0.01));
    }
  }
}

TEST_CASE("positivity violations are rejected") {
  std::vector<double> q{1.0, 1.0};
  CHECK_THROWS_AS(make_path(q, std::vector<double>{1.0, 0.0}), PositivityViolation);
  CHECK_THROWS_AS(make_path(q, std::vector<double>{1.0, -2.0}), PositivityViolation);
  CHECK_THROWS_AS(make_path(q, std::vector<double>{1.0, std::nan("")}), PositivityViolation);
  CHECK_THROWS_AS(make_path(q, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("schedule validation") {
  OrderSchedule s = unit_schedule(3);
  CHECK_NOTHROW(s.validate());
  s.times[2] = s.times[1];
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = unit_schedule(3);
  s.volumes[1] = 2.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = unit_schedule(3);
  s.sign = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  CHECK_THROWS_AS(OrderSchedule{}.validate(), InvalidArgument);
}

TEST_CASE("kernel shape classification") {
  const KernelShape sqrt_shape = classify_kernel_shape(ImpactKernel::power(0.5), 1.0, 1e6);
  CHECK(sqrt_shape.non_decreasing);
  CHECK(sqrt_shape.concave);
  CHECK_FALSE(sqrt_shape.convex);
  const KernelShape square = classify_kernel_shape(ImpactKernel::power(2.0), 1.0, 1e6);
  CHECK(square.convex);
  CHECK_FALSE(square.concave);
  // A positive theta switching on at u0 = 1 puts a convex kink there.
  const KernelShape kinked = classify_kernel_shape(log_decay_kernel(0.5, 0.3), 0.1, 1e6);
  CHECK_FALSE(kinked.concave);
}

TEST_CASE("VWAP constraint onset") {
  std::vector<double> q{1.0, 1.0, 1.0, 1.0};
  const ImpactPath rising = make_path(q, std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(vwap_constraint_onset(rising) == 0);
  const ImpactPath falling = make_path(q, std::vector<double>{4.0, 1.0, 1.0, 1.0});
  // R_2 = 2.5 > 1 and later R stays above one too.
  CHECK(vwap_constraint_onset(falling) == falling.size());
}

TEST_CASE("running participation") {
  MarketVolumes m;
  m.volumes = {2.0, 2.0, 4.0};
  m.participation = 0.5;
  const std::vector<double> q{1.0, 1.0, 1.0};
  const std::vector<double> r = m.running_participation(q);
  CHECK(r[0] == 0.5);
  CHECK(r[1] == 0.5);
  CHECK(r[2] == doctest::Approx(3.0 / 8.0));
  CHECK_THROWS_AS(m.running_participation(std::vector<double>{1.0}), InvalidArgument);
}
