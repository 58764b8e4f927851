#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "impactlab/impact_core.hpp"

namespace impactlab {

// G(t) = alpha + (1 - alpha) G0(t) with G0 either exp(-t / tau) or
// (1 + t / t0)^(-p). Both decays are convex and decreasing on [0, inf).
struct RelaxationProfile {
  enum class Family { Exponential, Power };

  double alpha = 1.0 / 3.0;
  Family family = Family::Exponential;
  double tau = 1.0;
  double t0 = 1.0;
  double p = 1.0;

  static RelaxationProfile exponential(double alpha, double tau) {
    return {alpha, Family::Exponential, tau, 1.0, 1.0};
  }
  static RelaxationProfile power(double alpha, double t0, double p) { return {alpha, Family::Power, 1.0, t0, p}; }

  // alpha in [0, 1/2], positive time scales.
  void validate() const;
};

struct NoiseSpec {
  double std_scale = 0.0;  // noise std as a fraction of I_N
  std::uint64_t seed = 0;
};

double eval_G0(const RelaxationProfile& profile, double t);
double eval_G(const RelaxationProfile& profile, double t);

// G^{-1}(r) for r in (alpha, 1]. Throws NoFairPricing for r <= alpha.
double inverse_G(const RelaxationProfile& profile, double r);

struct FairPricing {
  double friction = 0.0;         // R_N
  double time = 0.0;             // T_N = G^{-1}(R_N)
  double peak = 0.0;             // I_N
  double average = 0.0;          // <I>_N
  double residual_at_T = 0.0;    // G(T_N) I_N
  double residual_at_inf = 0.0;  // alpha I_N
};

// Throws NoFairPricing when R_N <= alpha.
FairPricing fair_pricing(const ImpactPath& path, const RelaxationProfile& profile);

// Residual impact G(t) I_N at the given times.
std::vector<double> residual_impact(const ImpactPath& path, const RelaxationProfile& profile,
                                    std::span<const double> times);

struct RelaxationCurve {
  std::vector<double> times;
  std::vector<double> g;      // G on the grid
  std::vector<double> g_hat;  // average of the m noisy normalized relaxations
  double sup_deviation = 0.0;
};

// m relaxations I_N G(t) + N_t with independent Gaussian N_t of standard
// deviation std_scale * I_N, averaged and divided by I_N on the grid
// t_j = horizon * j / (points - 1). Paths are generated in fixed chunks with
// derived seeds and reduced in chunk order, so the result ignores `jobs`.
RelaxationCurve relax_paths(const ImpactPath& path, const RelaxationProfile& profile, const NoiseSpec& noise,
                            double horizon, std::size_t m, std::size_t points = 101, std::size_t jobs = 1);

// Compares the average fair pricing time with G^{-1} of the average friction.
// For a convex decreasing G, Jensen's inequality gives
// mean_time >= time_at_mean_friction.
struct DurationAverage {
  double mean_time = 0.0;
  double mean_friction = 0.0;
  double time_at_mean_friction = 0.0;
  std::size_t samples = 0;
};

DurationAverage duration_average(std::span<const double> frictions, const RelaxationProfile& profile);

}  // namespace impactlab
