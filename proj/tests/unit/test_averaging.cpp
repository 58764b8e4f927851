#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "impactlab/averaging.hpp"
#include "impactlab/errors.hpp"
#include "oracles.hpp"

using namespace impactlab;

namespace {

// E[g(rho)] by Simpson against the law's density.
template <class G>
double expect_uniform(G g) {
  return testsupport::simpson(g, 0.0, 1.0, 20'000);
}

template <class G>
double expect_exponential(double lambda, G g) {
  return testsupport::simpson([&](double r) { return lambda * std::exp(-lambda * r) * g(r); }, 0.0,
                              80.0 / lambda, 400'000);
}

}  // namespace

TEST_CASE("psi closed forms against quadrature") {
  const RhoLaw u = RhoLaw::uniform01();
  const RhoLaw e = RhoLaw::exponential(1.5);
  const RhoLaw d = RhoLaw::dirac(0.5);
  for (double x : {1e-3, 0.01, 0.3, 0.5, 0.9, 0.999, 1.0}) {
    CAPTURE(x);
    CHECK(psi(u, x) == doctest::Approx(expect_uniform([x](double r) { return std::pow(x, r); })).epsilon(1e-10));
    CHECK(psi(e, x) ==
          doctest::Approx(expect_exponential(1.5, [x](double r) { return std::pow(x, r); })).epsilon(1e-9));
    CHECK(psi(d, x) == doctest::Approx(std::sqrt(x)).epsilon(1e-15));
    CHECK(psi_derivative(u, x) ==
          doctest::Approx(expect_uniform([x](double r) { return r * std::pow(x, r - 1.0); })).epsilon(1e-9));
    CHECK(psi_derivative(e, x) ==
          doctest::Approx(expect_exponential(1.5, [x](double r) { return r * std::pow(x, r - 1.0); }))
              .epsilon(1e-8));
  }
  CHECK_THROWS_AS(psi(u, 0.0), DomainError);
  CHECK_THROWS_AS(psi(u, 1.5), DomainError);
}

TEST_CASE("psi is increasing and equals one at x = 1") {
  for (const RhoLaw& law : {RhoLaw::uniform01(), RhoLaw::exponential(0.7), RhoLaw::dirac(2.0),
                            RhoLaw::empirical({0.1, 0.4, 0.4, 3.0})}) {
    CAPTURE(law.name());
    CHECK(psi(law, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    double previous = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double x = i / 200.0;
      const double v = psi(law, x);
      REQUIRE(v >= previous);
      REQUIRE(psi_derivative(law, x) >= 0.0);
      previous = v;
    }
  }
}

TEST_CASE("E[1 / (1 + rho)] against quadrature") {
  CHECK(mean_inv_one_plus_rho(RhoLaw::uniform01()) ==
        doctest::Approx(expect_uniform([](double r) { return 1.0 / (1.0 + r); })).epsilon(1e-12));
  for (double lambda : {0.1, 1.0, 4.0}) {
    CAPTURE(lambda);
    CHECK(mean_inv_one_plus_rho(RhoLaw::exponential(lambda)) ==
          doctest::Approx(expect_exponential(lambda, [](double r) { return 1.0 / (1.0 + r); })).epsilon(1e-8));
  }
  CHECK(mean_inv_one_plus_rho(RhoLaw::dirac(0.5)) == doctest::Approx(2.0 / 3.0));
  CHECK(mean_rho(RhoLaw::exponential(4.0)) == 0.25);
  // Jensen: E[1 / (1 + rho)] >= 1 / (1 + E[rho]).
  for (const RhoLaw& law : {RhoLaw::uniform01(), RhoLaw::exponential(1.0)}) {
    CHECK(mean_inv_one_plus_rho(law) > 1.0 / (1.0 + mean_rho(law)));
  }
}

TEST_CASE("empirical law") {
  const RhoLaw law = RhoLaw::empirical({2.0, 0.0, 1.0, 1.0});
  CHECK(law.support_max() == 2.0);
  CHECK(law.quantile(0.0) == 0.0);
  CHECK(law.quantile(0.3) == 1.0);
  CHECK(law.quantile(0.99) == 2.0);
  CHECK(mean_rho(law) == 1.0);
  const Estimate p = psi_estimate(law, 0.5);
  CHECK(p.value == doctest::Approx((1.0 + 0.5 + 0.5 + 0.25) / 4.0));
  CHECK(p.std_error > 0.0);
  CHECK(psi_derivative(law, 0.5) == doctest::Approx((0.0 + 1.0 + 1.0 + 2.0 * 0.5) / 4.0));
  CHECK_THROWS_AS(RhoLaw::empirical({}), InvalidArgument);
  CHECK_THROWS_AS(RhoLaw::empirical({-1.0}), InvalidArgument);
  CHECK_THROWS_AS(RhoLaw::exponential(0.0), InvalidArgument);
}

TEST_CASE("jackknife of the mean is the usual standard error") {
  std::vector<double> xs{1.0, 4.0, 2.0, 8.0, 5.0, 7.0};
  const Estimate j = jackknife_mean(xs);
  testsupport::KahanSum s;
  for (double x : xs) s.add(x);
  const double m = s.sum / 6.0;
  testsupport::KahanSum ss;
  for (double x : xs) ss.add((x - m) * (x - m));
  CHECK(j.value == doctest::Approx(m));
  CHECK(j.std_error == doctest::Approx(std::sqrt(ss.sum / 5.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("Monte Carlo psi is unbiased and independent of jobs") {
  for (const RhoLaw& law : {RhoLaw::uniform01(), RhoLaw::exponential(1.0)}) {
    for (double x : {0.05, 0.5}) {
      const Estimate a = psi_mc(law, x, 50'000, 77, 1);
      const Estimate b = psi_mc(law, x, 50'000, 77, 4);
      CAPTURE(law.name());
      CAPTURE(x);
      CHECK(a.value == b.value);
      CHECK(a.std_error == b.std_error);
      CHECK(std::abs(a.value - psi(law, x)) < 4.0 * a.std_error);
    }
  }
  const Estimate dirac = psi_mc(RhoLaw::dirac(0.5), 0.25, 1000, 1);
  CHECK(dirac.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dirac.std_error < 1e-12);
}

TEST_CASE("stratified samples hit every stratum") {
  const std::vector<double> r = stratified_rho_samples(RhoLaw::uniform01(), 1000, 3);
  for (std::size_t i = 0; i < r.size(); ++i) {
    REQUIRE(r[i] >= i / 1000.0);
    REQUIRE(r[i] < (i + 1) / 1000.0);
  }
  CHECK(stratified_rho_samples(RhoLaw::uniform01(), 10, 3) == stratified_rho_samples(RhoLaw::uniform01(), 10, 3));
}

TEST_CASE("averaged friction approaches E[1 / (1 + rho)]") {
  ScenarioSpec spec;
  spec.n = 5000;
  const FrictionAverage dirac = mean_friction_mc(RhoLaw::dirac(0.5), spec, ImpactKernel::power(0.0), 8, 2);
  CHECK(dirac.target == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(dirac.mean_friction.value - dirac.target) < 0.01);

  const FrictionAverage u1 = mean_friction_mc(RhoLaw::uniform01(), spec, ImpactKernel::power(0.0), 32, 2, 0.2, 1);
  const FrictionAverage u4 = mean_friction_mc(RhoLaw::uniform01(), spec, ImpactKernel::power(0.0), 32, 2, 0.2, 4);
  CHECK(u1.tails == u4.tails);
  CHECK(std::abs(u1.mean_friction.value - std::numbers::ln2) < 0.01);
  for (std::size_t i = 0; i < u1.tails.size(); ++i) {
    REQUIRE(std::abs(u1.tails[i] - 1.0 / (1.0 + u1.rhos[i])) < 0.01);
  }
}
