#pragma once

#include <cstddef>
#include <vector>

#include "impactlab/impact_core.hpp"

namespace impactlab {

// Half-open range [begin, end) of 0-based path indices.
struct IndexWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Indices whose cumulative size lies in [s_lo, s_hi].
IndexWindow window_for_sizes(const ImpactPath& path, double s_lo, double s_hi);

// rho = 1 / mean(R over the trailing tail) - 1. Throws NonEquilibrium when the
// tail mean is not in (0, 1] and InvalidArgument for paths shorter than 100.
double rho_from_friction(const ImpactPath& path, double tail_fraction = 0.2);

// Least-squares slope of log I against log S over the window, clipped at 0.
// The window must hold at least two points and span a decade in S.
double rho_loglog(const ImpactPath& path, IndexWindow window);

// rho_n = (S_n / Q_n) * (1 - I_{n-1} / I_n), with I_0 = 0 (so rho_1 = 1).
std::vector<double> rho_local(const ImpactPath& path);

// Tail mean of rho_local.
double rho_local_estimate(const ImpactPath& path, double tail_fraction = 0.2);

// True when rho_local over the tail is large (mean of its second half >= 100)
// and still growing (second-half mean >= 1.1 x first-half mean): the
// rho = +infinity regime.
bool detect_divergence(const ImpactPath& path, double tail_fraction = 0.2);

struct LimitPoints {
  double liminf = 0.0;
  double limsup = 0.0;
  double max_gap = 0.0;  // longest run of empty resolution-wide bins, times the resolution
};

LimitPoints limit_points(const ImpactPath& path, double tail_fraction = 0.2, double resolution = 0.01);

// I_n / (f(V_1 + ... + V_n) * participation^rho); tends to 1 in equilibrium.
std::vector<double> participation_impact(const ImpactPath& path, const MarketVolumes& volumes,
                                         const ImpactKernel& kernel);

// max |R(lambda S) / R(S) - 1| over path points with S >= s_min and
// lambda S <= S_n, R interpolated linearly in S.
double slow_variation_gap(const ImpactPath& path, double lambda, double s_min);

// (S_n / Q_n) * (R_{n-1} / R_n - 1) for n >= 2 (first entry is for n = 2).
std::vector<double> speed_diagnostic(const ImpactPath& path);

struct FrictionAnalysis {
  double limit_estimate = 0.0;  // tail mean of R
  double rho_hat_friction = 0.0;
  double rho_hat_loglog = 0.0;
  double rho_hat_local = 0.0;
  bool converged = false;
  bool divergent = false;  // rho = +infinity flag
  bool estimators_available = false;  // rho_hat_friction defined
  bool window_available = false;      // rho_hat_loglog and rho_hat_local defined
  double tail_liminf = 0.0;
  double tail_limsup = 0.0;
};

// Runs every estimator with the default settings: tail fraction 0.2,
// convergence when the tail spread is below 0.02, log-log window
// S in [S_n / 100, S_n]. Estimators need at least 100 orders and a decade of
// cumulative size; otherwise estimators_available is false and the rho
// fields are left at zero.
FrictionAnalysis analyze_friction(const ImpactPath& path, double tail_fraction = 0.2);

}  // namespace impactlab
