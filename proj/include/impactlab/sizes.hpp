#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "impactlab/averaging.hpp"
#include "impactlab/rng.hpp"

namespace impactlab {

// Metaorder length N with P(N = n) = n^{-(1+beta)} / Z on [1, n_max].
//
// Z is summed exactly. Sampling is inverse-CDF over a table of the first
// 2^20 values plus an exact rejection sampler on the remaining tail (continuous
// Pareto proposal, floor, accept with the pmf-to-proposal ratio).
class LengthLaw {
 public:
  explicit LengthLaw(double beta, std::uint64_t n_max = 10'000'000);

  double beta() const noexcept { return beta_; }
  std::uint64_t n_max() const noexcept { return n_max_; }
  double normalizer() const noexcept { return normalizer_; }
  // C in P(N = n) = C n^{-(1+beta)}, i.e. 1 / Z.
  double constant() const noexcept { return 1.0 / normalizer_; }

  double pmf(std::uint64_t n) const;
  // P(N >= n), summed exactly.
  double survival(std::uint64_t n) const;
  // P(N >= n + 1 | N >= n).
  double hazard_ratio(std::uint64_t n) const;

  std::uint64_t sample(Rng& rng) const;

 private:
  double weight(std::uint64_t n) const;
  std::uint64_t sample_tail(Rng& rng) const;

  double beta_;
  std::uint64_t n_max_;
  std::uint64_t table_limit_;
  double normalizer_ = 0.0;
  double tail_mass_ = 0.0;     // sum of weights above the table
  std::vector<double> cdf_;    // cdf_[k] = P(N <= k + 1) over the table
  std::vector<double> suffix_; // suffix_[k] = sum_{j = k+1}^{table_limit} weight(j)
};

std::uint64_t sample_length(const LengthLaw& law, std::uint64_t seed);

enum class SizeVariant { Lower, Upper };

// Q | N = n uniform on [n q-, n q- + (q+ - q-) n^{1-gamma}] (Lower) or on
// [n q+ - (q+ - q-) n^{1-gamma}, n q+] (Upper).
struct SizeLaw {
  double gamma = 0.0;
  SizeVariant variant = SizeVariant::Lower;
  double q_minus = 1.0;
  double q_plus = 2.0;

  void validate() const;

  struct Interval {
    double lo;
    double hi;
  };
  Interval interval(std::uint64_t n) const;
  double sample(std::uint64_t n, Rng& rng) const;
  // E[Q^nu | N = n], stable for vanishing interval width.
  double conditional_moment(std::uint64_t n, double nu) const;
  // P(a <= Q <= b | N = n).
  double conditional_probability(std::uint64_t n, double a, double b) const;
};

double sample_size(std::uint64_t length, const SizeLaw& law, std::uint64_t seed);

struct BracketCheck {
  std::uint64_t n = 0;
  double probability = 0.0;  // P(n q- <= Q <= n q+)
  double lower_bound = 0.0;  // (C / 2) n^{-(1+beta)}
  double upper_bound = 0.0;  // (2 C / beta) n^{-beta}
  bool lower_ok = false;
  bool upper_ok = false;
};

// Exact P(n q- <= Q <= n q+) by summing the length pmf against the
// conditional size law, with both bounds evaluated.
BracketCheck size_bracket_probability(const LengthLaw& length, const SizeLaw& size, std::uint64_t n);

struct BracketScan {
  std::vector<BracketCheck> checks;
  // Smallest tested n from which both bounds hold for every larger tested n;
  // empty when the largest tested n already fails.
  std::optional<std::uint64_t> burn_in;
};

BracketScan bracket_scan(const LengthLaw& length, const SizeLaw& size, std::span<const std::uint64_t> ns);

struct MomentFit {
  double exponent = 0.0;  // fitted decay of Delta_n = P(N = n) E[Q^nu | N = n]
  double expected = 0.0;  // 1 + beta - nu
  bool finite = false;    // E[Q^nu] < inf verdict
};

// Fits log Delta_n against log n on a geometric grid over [n_lo, n_hi] and
// declares E[Q^nu] finite iff the fitted exponent exceeds 1 + 0.01 (the
// margin keeps the nu = beta boundary, exponent exactly 1, on the infinite
// side).
MomentFit moment_exponent(double nu, double beta, const SizeLaw& size, double n_lo = 1e3, double n_hi = 1e6,
                          std::size_t points = 61);

// Hill estimate of the tail index xi in P(X > x) ~ C x^{-xi}, using the top
// `top_fraction` order statistics.
double hill_tail_index(std::vector<double> samples, double top_fraction = 0.01);

// rho laws whose support stays below beta, so that E[Q^rho] is finite.
bool admissible_rho_law(const RhoLaw& law, double beta);

}  // namespace impactlab
