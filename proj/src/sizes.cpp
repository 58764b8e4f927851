#include "impactlab/sizes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "impactlab/errors.hpp"
#include "impactlab/numeric.hpp"

namespace impactlab {
namespace {

constexpr std::uint64_t kTableSize = std::uint64_t{1} << 20;
constexpr double kFiniteMargin = 0.01;

double descending_weight_sum(std::uint64_t from, std::uint64_t to, const std::function<double(std::uint64_t)>& w) {
  CompensatedSum acc;
  for (std::uint64_t k = to; k >= from && k > 0; --k) acc.add(w(k));
  return acc.value();
}

}  // namespace

LengthLaw::LengthLaw(double beta, std::uint64_t n_max) : beta_(beta), n_max_(n_max) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("tail index beta must be positive");
  if (n_max < 1) throw InvalidArgument("length truncation must be >= 1");
  table_limit_ = std::min(n_max_, kTableSize);

  suffix_.assign(table_limit_ + 1, 0.0);
  CompensatedSum acc;
  for (std::uint64_t k = table_limit_; k >= 1; --k) {
    acc.add(weight(k));
    suffix_[k - 1] = acc.value();
  }
  if (n_max_ > table_limit_) {
    tail_mass_ = descending_weight_sum(table_limit_ + 1, n_max_, [this](std::uint64_t k) { return weight(k); });
  }
  normalizer_ = suffix_[0] + tail_mass_;

  cdf_.resize(table_limit_);
  CompensatedSum prefix;
  for (std::uint64_t k = 1; k <= table_limit_; ++k) {
    prefix.add(weight(k));
    cdf_[k - 1] = prefix.value() / normalizer_;
  }
}

double LengthLaw::weight(std::uint64_t n) const { return std::pow(static_cast<double>(n), -(1.0 + beta_)); }

double LengthLaw::pmf(std::uint64_t n) const {
  if (n < 1 || n > n_max_) return 0.0;
  return weight(n) / normalizer_;
}

double LengthLaw::survival(std::uint64_t n) const {
  if (n <= 1) return 1.0;
  if (n > n_max_) return 0.0;
  if (n <= table_limit_) return (suffix_[n - 1] + tail_mass_) / normalizer_;
  return descending_weight_sum(n, n_max_, [this](std::uint64_t k) { return weight(k); }) / normalizer_;
}

double LengthLaw::hazard_ratio(std::uint64_t n) const {
  const double at_least_n = survival(n);
  if (!(at_least_n > 0.0)) throw DomainError("hazard ratio beyond the truncation point");
  return survival(n + 1) / at_least_n;
}

std::uint64_t LengthLaw::sample(Rng& rng) const {
  const double u = uniform01(rng);
  if (u < cdf_.back() || n_max_ == table_limit_) {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto k = static_cast<std::uint64_t>(it - cdf_.begin());
    return std::min<std::uint64_t>(k + 1, table_limit_);
  }
  return sample_tail(rng);
}

std::uint64_t LengthLaw::sample_tail(Rng& rng) const {
  // Proposal: X with density proportional to x^{-(1+beta)} on [T+1, n_max+1),
  // K = floor(X). Target/proposal mass ratio at k is
  // k^{-(1+beta)} / int_k^{k+1} x^{-(1+beta)} dx <= (1 + 1/k)^{1+beta}.
  const double lo = static_cast<double>(table_limit_ + 1);
  const double hi = static_cast<double>(n_max_) + 1.0;
  const double lo_pow = std::pow(lo, -beta_);
  const double hi_pow = std::pow(hi, -beta_);
  const double bound = std::pow(1.0 + 1.0 / lo, 1.0 + beta_);
  for (;;) {
    const double v = uniform01(rng);
    const double x = std::pow(lo_pow - v * (lo_pow - hi_pow), -1.0 / beta_);
    const auto k = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(x), table_limit_ + 1, n_max_);
    const double kd = static_cast<double>(k);
    const double cell = std::pow(kd, -beta_) * -std::expm1(-beta_ * std::log1p(1.0 / kd)) / beta_;
    const double ratio = weight(k) / cell;
    if (uniform01(rng) * bound <= ratio) return k;
  }
}

std::uint64_t sample_length(const LengthLaw& law, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  return law.sample(rng);
}

void SizeLaw::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be finite and >= 0");
  if (!(q_minus > 0.0) || !(q_plus >= q_minus) || !std::isfinite(q_plus)) {
    throw InvalidArgument("size law needs 0 < q_minus <= q_plus < inf");
  }
}

SizeLaw::Interval SizeLaw::interval(std::uint64_t n) const {
  if (n < 1) throw InvalidArgument("metaorder length must be >= 1");
  const double nd = static_cast<double>(n);
  const double width = (q_plus - q_minus) * std::pow(nd, 1.0 - gamma);
  if (variant == SizeVariant::Lower) return {nd * q_minus, nd * q_minus + width};
  return {nd * q_plus - width, nd * q_plus};
}

double SizeLaw::sample(std::uint64_t n, Rng& rng) const {
  const Interval range = interval(n);
  return std::min(range.hi, range.lo + (range.hi - range.lo) * uniform01(rng));
}

double SizeLaw::conditional_moment(std::uint64_t n, double nu) const {
  if (!(nu >= 0.0)) throw InvalidArgument("moment order must be >= 0");
  const double nd = static_cast<double>(n);
  const double width = (q_plus - q_minus) * std::pow(nd, 1.0 - gamma);
  if (variant == SizeVariant::Lower) {
    const double lo = nd * q_minus;
    const double r = width / lo;
    if (r == 0.0) return std::pow(lo, nu);
    return std::pow(lo, nu) * std::expm1((1.0 + nu) * std::log1p(r)) / ((1.0 + nu) * r);
  }
  const double hi = nd * q_plus;
  const double s = width / hi;
  if (s == 0.0) return std::pow(hi, nu);
  return std::pow(hi, nu) * -std::expm1((1.0 + nu) * std::log1p(-s)) / ((1.0 + nu) * s);
}

double SizeLaw::conditional_probability(std::uint64_t n, double a, double b) const {
  const Interval range = interval(n);
  const double width = range.hi - range.lo;
  if (!(width > 0.0)) return (range.lo >= a && range.lo <= b) ? 1.0 : 0.0;
  const double overlap = std::min(b, range.hi) - std::max(a, range.lo);
  return overlap > 0.0 ? overlap / width : 0.0;
}

double sample_size(std::uint64_t length, const SizeLaw& law, std::uint64_t seed) {
  law.validate();
  Rng rng = make_rng(seed, 1);
  return law.sample(length, rng);
}

BracketCheck size_bracket_probability(const LengthLaw& length, const SizeLaw& size, std::uint64_t n) {
  size.validate();
  if (n < 1) throw InvalidArgument("bracket index must be >= 1");
  const double nd = static_cast<double>(n);
  const double a = nd * size.q_minus;
  const double b = nd * size.q_plus;
  // Q in [a, b] needs N q+ >= a and N q- <= b.
  const auto m_lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(a / size.q_plus)));
  const auto m_hi = std::min<std::uint64_t>(length.n_max(), static_cast<std::uint64_t>(std::ceil(b / size.q_minus)));
  CompensatedSum acc;
  for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
    const double p = size.conditional_probability(m, a, b);
    if (p > 0.0) acc.add(length.pmf(m) * p);
  }
  BracketCheck check;
  check.n = n;
  check.probability = acc.value();
  const double c = length.constant();
  const double beta = length.beta();
  check.lower_bound = 0.5 * c * std::pow(nd, -(1.0 + beta));
  check.upper_bound = 2.0 * c / beta * std::pow(nd, -beta);
  check.lower_ok = check.probability >= check.lower_bound;
  check.upper_ok = check.probability <= check.upper_bound;
  return check;
}

BracketScan bracket_scan(const LengthLaw& length, const SizeLaw& size, std::span<const std::uint64_t> ns) {
  std::vector<std::uint64_t> sorted(ns.begin(), ns.end());
  std::sort(sorted.begin(), sorted.end());
  BracketScan scan;
  for (std::uint64_t n : sorted) scan.checks.push_back(size_bracket_probability(length, size, n));
  for (std::size_t i = scan.checks.size(); i-- > 0;) {
    const BracketCheck& c = scan.checks[i];
    if (!(c.lower_ok && c.upper_ok)) break;
    scan.burn_in = c.n;
  }
  return scan;
}

MomentFit moment_exponent(double nu, double beta, const SizeLaw& size, double n_lo, double n_hi,
                          std::size_t points) {
  size.validate();
  if (!(nu >= 0.0)) throw InvalidArgument("moment order must be >= 0");
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  if (!(n_lo >= 1.0) || !(n_hi > n_lo) || points < 2) throw InvalidArgument("bad fitting range");
  std::vector<double> log_n;
  std::vector<double> log_delta;
  const double step = std::log(n_hi / n_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const auto n = static_cast<std::uint64_t>(std::llround(n_lo * std::exp(step * static_cast<double>(i))));
    const double ln = std::log(static_cast<double>(n));
    log_n.push_back(ln);
    // The constant C drops out of the slope; P(N = n) is taken as n^{-(1+beta)}.
    log_delta.push_back(-(1.0 + beta) * ln + std::log(size.conditional_moment(n, nu)));
  }
  MomentFit fit;
  fit.exponent = -least_squares(log_n, log_delta).slope;
  fit.expected = 1.0 + beta - nu;
  fit.finite = fit.exponent > 1.0 + kFiniteMargin;
  return fit;
}

double hill_tail_index(std::vector<double> samples, double top_fraction) {
  if (samples.size() < 2) throw InvalidArgument("Hill estimator needs at least two samples");
  if (!(top_fraction > 0.0 && top_fraction < 1.0)) throw InvalidArgument("top fraction must be in (0, 1)");
  auto k = static_cast<std::size_t>(top_fraction * static_cast<double>(samples.size()));
  k = std::clamp<std::size_t>(k, 1, samples.size() - 1);
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k), samples.end(),
                   std::greater<>());
  const double threshold = samples[k];
  if (!(threshold > 0.0)) throw DomainError("Hill estimator needs positive order statistics");
  CompensatedSum acc;
  for (std::size_t i = 0; i < k; ++i) acc.add(std::log(samples[i] / threshold));
  const double mean_excess = acc.value() / static_cast<double>(k);
  if (!(mean_excess > 0.0)) throw DomainError("top order statistics are all tied");
  return 1.0 / mean_excess;
}

bool admissible_rho_law(const RhoLaw& law, double beta) { return law.support_max() < beta; }

}  // namespace impactlab
