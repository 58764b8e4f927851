#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "impactlab/generator.hpp"
#include "impactlab/impact_core.hpp"
#include "impactlab/rng.hpp"

namespace impactlab {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Law of the random equilibrium index rho. Every variant only produces finite
// values, so sampling from it stays on the event "R_n converges".
class RhoLaw {
 public:
  struct Dirac {
    double lambda;
  };
  struct Uniform01 {};
  struct Exponential {
    double lambda;
  };
  struct Empirical {
    std::vector<double> samples;  // sorted ascending on construction
  };
  using Variant = std::variant<Dirac, Uniform01, Exponential, Empirical>;

  static RhoLaw dirac(double lambda);
  static RhoLaw uniform01();
  static RhoLaw exponential(double lambda);
  static RhoLaw empirical(std::vector<double> samples);

  const Variant& variant() const noexcept { return law_; }
  std::string name() const;

  // Inverse CDF at u in [0, 1).
  double quantile(double u) const;
  double sample(Rng& rng) const { return quantile(impactlab::uniform01(rng)); }
  // Largest value in the support (+inf for the exponential law).
  double support_max() const;

 private:
  explicit RhoLaw(Variant law) : law_(std::move(law)) {}
  Variant law_;
};

// Leave-one-out jackknife for a sample mean.
Estimate jackknife_mean(std::span<const double> values);

// psi(x) = E[x^rho] on (0, 1]. Closed forms for the parametric laws, plug-in
// mean for the empirical one. Throws DomainError outside (0, 1].
double psi(const RhoLaw& law, double x);
// As psi, with a jackknife standard error for the empirical law (0 otherwise).
Estimate psi_estimate(const RhoLaw& law, double x);

// psi'(x) = E[rho x^(rho - 1)].
double psi_derivative(const RhoLaw& law, double x);

double mean_rho(const RhoLaw& law);
double mean_inv_one_plus_rho(const RhoLaw& law);
Estimate mean_inv_one_plus_rho_estimate(const RhoLaw& law);

// Monte Carlo estimate of E[x^rho] from m draws. Draws are produced in fixed
// chunks with per-chunk derived seeds and merged in chunk order, so the result
// does not depend on `jobs`.
Estimate psi_mc(const RhoLaw& law, double x, std::size_t m, std::uint64_t seed, std::size_t jobs = 1);

// m draws of rho by stratified inverse-CDF sampling: u_i uniform on
// [i/m, (i+1)/m).
std::vector<double> stratified_rho_samples(const RhoLaw& law, std::size_t m, std::uint64_t seed);

struct FrictionAverage {
  Estimate mean_friction;     // average over paths of the tail-mean of R
  double target = 0.0;        // E[1 / (1 + rho)]
  std::vector<double> rhos;   // sampled index per path
  std::vector<double> tails;  // tail-mean of R per path
};

// Equilibrium paths with rho drawn from the law (stratified) and kernel shape
// taken from `base` (its rho is replaced). Schedules use seeds derived from a
// stream independent of the rho draws.
FrictionAverage mean_friction_mc(const RhoLaw& law, const ScenarioSpec& scenario, const ImpactKernel& base,
                                 std::size_t paths, std::uint64_t seed, double tail_fraction = 0.2,
                                 std::size_t jobs = 1);

}  // namespace impactlab
