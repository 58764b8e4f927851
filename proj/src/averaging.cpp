#include "impactlab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "impactlab/errors.hpp"
#include "impactlab/numeric.hpp"
#include "impactlab/parallel.hpp"
#include "impactlab/special.hpp"

namespace impactlab {
namespace {

constexpr std::size_t kChunk = 8192;
constexpr std::uint64_t kRhoStream = 0x5248;       // "RH"
constexpr std::uint64_t kScheduleStream = 0x5343;  // "SC"

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_unit_interval(double x) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("psi is defined on (0, 1]");
}

// int_0^1 r e^{r t} dr.
double uniform_first_moment(double t) {
  if (std::abs(t) < 0.5) {
    // sum_k t^k / (k! (k + 2))
    double power = 1.0;
    double sum = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double term = power / (k + 2);
      sum += term;
      if (std::abs(term) < 1e-18) break;
      power *= t / (k + 1);
    }
    return sum;
  }
  return (std::exp(t) * (t - 1.0) + 1.0) / (t * t);
}

// Running mean / M2 for chunked Welford merges.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0.0) return;
    const double total = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * other.count / total;
    m2 += other.m2 + delta * delta * count * other.count / total;
    count = total;
  }
};

}  // namespace

RhoLaw RhoLaw::dirac(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("Dirac location must be finite and >= 0");
  return RhoLaw(Dirac{lambda});
}

RhoLaw RhoLaw::uniform01() { return RhoLaw(Uniform01{}); }

RhoLaw RhoLaw::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("exponential rate must be positive");
  return RhoLaw(Exponential{lambda});
}

RhoLaw RhoLaw::empirical(std::vector<double> samples) {
  if (samples.empty()) throw InvalidArgument("empirical law needs at least one sample");
  for (double s : samples) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("empirical rho samples must be finite and >= 0");
  }
  std::sort(samples.begin(), samples.end());
  return RhoLaw(Empirical{std::move(samples)});
}

std::string RhoLaw::name() const {
  return std::visit(Overloaded{
                        [](const Dirac& d) { return "dirac(" + std::to_string(d.lambda) + ")"; },
                        [](const Uniform01&) { return std::string("uniform01"); },
                        [](const Exponential& e) { return "exponential(" + std::to_string(e.lambda) + ")"; },
                        [](const Empirical& e) { return "empirical(" + std::to_string(e.samples.size()) + ")"; },
                    },
                    law_);
}

double RhoLaw::quantile(double u) const {
  return std::visit(Overloaded{
                        [](const Dirac& d) { return d.lambda; },
                        [u](const Uniform01&) { return u; },
                        [u](const Exponential& e) { return -std::log1p(-u) / e.lambda; },
                        [u](const Empirical& e) {
                          const auto m = e.samples.size();
                          const auto k = std::min(m - 1, static_cast<std::size_t>(u * static_cast<double>(m)));
                          return e.samples[k];
                        },
                    },
                    law_);
}

double RhoLaw::support_max() const {
  return std::visit(Overloaded{
                        [](const Dirac& d) { return d.lambda; },
                        [](const Uniform01&) { return 1.0; },
                        [](const Exponential&) { return std::numeric_limits<double>::infinity(); },
                        [](const Empirical& e) { return e.samples.back(); },
                    },
                    law_);
}

Estimate jackknife_mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("jackknife of an empty sample");
  const double m = static_cast<double>(values.size());
  const double total = compensated_sum(values);
  Estimate est;
  est.value = total / m;
  if (values.size() < 2) return est;
  CompensatedSum spread;
  for (double v : values) {
    const double leave_one_out = (total - v) / (m - 1.0);
    spread.add((leave_one_out - est.value) * (leave_one_out - est.value));
  }
  est.std_error = std::sqrt((m - 1.0) / m * spread.value());
  return est;
}

Estimate psi_estimate(const RhoLaw& law, double x) {
  check_unit_interval(x);
  const double t = std::log(x);
  return std::visit(Overloaded{
                        [x](const RhoLaw::Dirac& d) { return Estimate{std::pow(x, d.lambda), 0.0}; },
                        [t](const RhoLaw::Uniform01&) {
                          // (x - 1) / log x with the removable singularity at x = 1.
                          if (t == 0.0) return Estimate{1.0, 0.0};
                          return Estimate{std::expm1(t) / t, 0.0};
                        },
                        [t](const RhoLaw::Exponential& e) { return Estimate{e.lambda / (e.lambda - t), 0.0}; },
                        [x](const RhoLaw::Empirical& e) {
                          std::vector<double> values(e.samples.size());
                          for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::pow(x, e.samples[i]);
                          return jackknife_mean(values);
                        },
                    },
                    law.variant());
}

double psi(const RhoLaw& law, double x) { return psi_estimate(law, x).value; }

double psi_derivative(const RhoLaw& law, double x) {
  check_unit_interval(x);
  const double t = std::log(x);
  return std::visit(Overloaded{
                        [x](const RhoLaw::Dirac& d) {
                          return d.lambda == 0.0 ? 0.0 : d.lambda * std::pow(x, d.lambda - 1.0);
                        },
                        [x, t](const RhoLaw::Uniform01&) { return uniform_first_moment(t) / x; },
                        [x, t](const RhoLaw::Exponential& e) {
                          const double denom = e.lambda - t;
                          return e.lambda / (x * denom * denom);
                        },
                        [x](const RhoLaw::Empirical& e) {
                          CompensatedSum acc;
                          for (double r : e.samples) acc.add(r == 0.0 ? 0.0 : r * std::pow(x, r - 1.0));
                          return acc.value() / static_cast<double>(e.samples.size());
                        },
                    },
                    law.variant());
}

double mean_rho(const RhoLaw& law) {
  return std::visit(Overloaded{
                        [](const RhoLaw::Dirac& d) { return d.lambda; },
                        [](const RhoLaw::Uniform01&) { return 0.5; },
                        [](const RhoLaw::Exponential& e) { return 1.0 / e.lambda; },
                        [](const RhoLaw::Empirical& e) { return mean(e.samples); },
                    },
                    law.variant());
}

Estimate mean_inv_one_plus_rho_estimate(const RhoLaw& law) {
  return std::visit(Overloaded{
                        [](const RhoLaw::Dirac& d) { return Estimate{1.0 / (1.0 + d.lambda), 0.0}; },
                        [](const RhoLaw::Uniform01&) { return Estimate{std::numbers::ln2, 0.0}; },
                        [](const RhoLaw::Exponential& e) {
                          // -lambda e^lambda Ei(-lambda) = lambda e^lambda E1(lambda)
                          return Estimate{e.lambda * scaled_exp_integral_e1(e.lambda), 0.0};
                        },
                        [](const RhoLaw::Empirical& e) {
                          std::vector<double> values(e.samples.size());
                          for (std::size_t i = 0; i < values.size(); ++i) values[i] = 1.0 / (1.0 + e.samples[i]);
                          return jackknife_mean(values);
                        },
                    },
                    law.variant());
}

double mean_inv_one_plus_rho(const RhoLaw& law) { return mean_inv_one_plus_rho_estimate(law).value; }

Estimate psi_mc(const RhoLaw& law, double x, std::size_t m, std::uint64_t seed, std::size_t jobs) {
  check_unit_interval(x);
  if (m == 0) throw InvalidArgument("Monte Carlo needs at least one draw");
  const std::size_t chunks = (m + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    const std::size_t count = std::min(kChunk, m - c * kChunk);
    Moments& acc = partial[c];
    for (std::size_t i = 0; i < count; ++i) acc.add(std::pow(x, law.sample(rng)));
  });
  Moments total;
  for (const Moments& p : partial) total.merge(p);
  Estimate est;
  est.value = total.mean;
  est.std_error = m > 1 ? std::sqrt(total.m2 / (total.count - 1.0) / total.count) : 0.0;
  return est;
}

std::vector<double> stratified_rho_samples(const RhoLaw& law, std::size_t m, std::uint64_t seed) {
  std::vector<double> out(m);
  Rng rng = make_rng(seed, kRhoStream);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = (static_cast<double>(i) + uniform01(rng)) / static_cast<double>(m);
    out[i] = law.quantile(std::min(u, std::nextafter(1.0, 0.0)));
  }
  return out;
}

FrictionAverage mean_friction_mc(const RhoLaw& law, const ScenarioSpec& scenario, const ImpactKernel& base,
                                 std::size_t paths, std::uint64_t seed, double tail_fraction,
                                 std::size_t jobs) {
  if (paths == 0) throw InvalidArgument("need at least one path");
  FrictionAverage result;
  result.target = mean_inv_one_plus_rho(law);
  result.rhos = stratified_rho_samples(law, paths, seed);
  result.tails.resize(paths);
  const std::uint64_t schedule_seed = derive_seed(seed, kScheduleStream);
  parallel_for(paths, jobs, [&](std::size_t i) {
    ScenarioSpec spec = scenario;
    spec.seed = derive_seed(schedule_seed, i);
    ImpactKernel kernel = base;
    kernel.rho = result.rhos[i];
    const Scenario sim = gen_equilibrium(spec, kernel);
    const std::size_t begin = tail_begin(sim.path.size(), tail_fraction);
    result.tails[i] = mean(std::span<const double>(sim.path.friction).subspan(begin));
  });
  result.mean_friction = jackknife_mean(result.tails);
  return result;
}

}  // namespace impactlab
