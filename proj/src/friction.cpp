#include "impactlab/friction.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "impactlab/errors.hpp"
#include "impactlab/numeric.hpp"

namespace impactlab {
namespace {

constexpr std::size_t kMinEstimatorLength = 100;
constexpr double kConvergenceSpread = 0.02;
constexpr double kDivergenceLevel = 100.0;
constexpr double kDivergenceGrowth = 1.1;

std::span<const double> tail_of(const std::vector<double>& xs, double tail_fraction) {
  const std::size_t begin = tail_begin(xs.size(), tail_fraction);
  return std::span<const double>(xs).subspan(begin);
}

// R interpolated linearly in S; s must lie within [S_1, S_n].
double friction_at(const ImpactPath& path, double s) {
  const auto& sizes = path.cumulative_sizes;
  const auto it = std::lower_bound(sizes.begin(), sizes.end(), s);
  const auto k = static_cast<std::size_t>(it - sizes.begin());
  if (k == 0) return path.friction.front();
  if (k >= sizes.size()) return path.friction.back();
  const double w = (s - sizes[k - 1]) / (sizes[k] - sizes[k - 1]);
  return (1.0 - w) * path.friction[k - 1] + w * path.friction[k];
}

}  // namespace

IndexWindow window_for_sizes(const ImpactPath& path, double s_lo, double s_hi) {
  const auto& sizes = path.cumulative_sizes;
  IndexWindow window;
  window.begin = static_cast<std::size_t>(std::lower_bound(sizes.begin(), sizes.end(), s_lo) - sizes.begin());
  window.end = static_cast<std::size_t>(std::upper_bound(sizes.begin(), sizes.end(), s_hi) - sizes.begin());
  if (window.end < window.begin) window.end = window.begin;
  return window;
}

double rho_from_friction(const ImpactPath& path, double tail_fraction) {
  if (path.size() < kMinEstimatorLength) {
    throw InvalidArgument("friction estimator needs at least 100 child orders");
  }
  const double r_bar = mean(tail_of(path.friction, tail_fraction));
  if (!std::isfinite(r_bar) || !(r_bar > 0.0) || r_bar > 1.0 + 1e-9) {
    throw NonEquilibrium("tail mean of the friction is outside (0, 1]");
  }
  return std::max(0.0, 1.0 / r_bar - 1.0);
}

double rho_loglog(const ImpactPath& path, IndexWindow window) {
  if (window.end > path.size() || window.begin >= window.end || window.end - window.begin < 2) {
    throw DegenerateWindow("log-log window needs at least two path points");
  }
  const double s_first = path.cumulative_sizes[window.begin];
  const double s_last = path.cumulative_sizes[window.end - 1];
  if (!(s_last >= 10.0 * s_first)) {
    throw DegenerateWindow("log-log window must span at least one decade of cumulative size");
  }
  std::vector<double> log_s;
  std::vector<double> log_i;
  log_s.reserve(window.end - window.begin);
  log_i.reserve(window.end - window.begin);
  for (std::size_t k = window.begin; k < window.end; ++k) {
    log_s.push_back(std::log(path.cumulative_sizes[k]));
    log_i.push_back(std::log(path.impacts[k]));
  }
  return std::max(0.0, least_squares(log_s, log_i).slope);
}

std::vector<double> rho_local(const ImpactPath& path) {
  std::vector<double> out(path.size());
  double previous = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double ratio = previous / path.impacts[k];
    out[k] = path.cumulative_sizes[k] / path.volumes[k] * (1.0 - ratio);
    previous = path.impacts[k];
  }
  return out;
}

double rho_local_estimate(const ImpactPath& path, double tail_fraction) {
  if (path.empty()) throw InvalidArgument("empty path");
  const std::vector<double> local = rho_local(path);
  return mean(tail_of(local, tail_fraction));
}

bool detect_divergence(const ImpactPath& path, double tail_fraction) {
  if (path.size() < 4) return false;
  const std::vector<double> local = rho_local(path);
  const std::span<const double> tail = tail_of(local, tail_fraction);
  if (tail.size() < 2) return false;
  const std::size_t half = tail.size() / 2;
  const double early = mean(tail.first(half));
  const double late = mean(tail.subspan(half));
  return late >= kDivergenceLevel && late >= kDivergenceGrowth * early;
}

LimitPoints limit_points(const ImpactPath& path, double tail_fraction, double resolution) {
  if (path.empty()) throw InvalidArgument("empty path");
  if (!(resolution > 0.0)) throw InvalidArgument("resolution must be positive");
  const std::span<const double> tail = tail_of(path.friction, tail_fraction);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  LimitPoints points;
  points.liminf = *lo;
  points.limsup = *hi;
  const double span = points.limsup - points.liminf;
  if (!(span > 0.0)) return points;

  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(span / resolution)));
  std::vector<bool> occupied(bins, false);
  for (double r : tail) {
    auto bin = static_cast<std::size_t>((r - points.liminf) / resolution);
    occupied[std::min(bin, bins - 1)] = true;
  }
  std::size_t run = 0;
  std::size_t longest = 0;
  for (bool hit : occupied) {
    run = hit ? 0 : run + 1;
    longest = std::max(longest, run);
  }
  points.max_gap = static_cast<double>(longest) * resolution;
  return points;
}

std::vector<double> participation_impact(const ImpactPath& path, const MarketVolumes& volumes,
                                         const ImpactKernel& kernel) {
  if (volumes.volumes.size() != path.size()) {
    throw InvalidArgument("market volumes are not aligned with the path");
  }
  std::vector<double> market_sizes(path.size());
  CompensatedSum acc;
  for (std::size_t k = 0; k < path.size(); ++k) {
    acc.add(volumes.volumes[k]);
    market_sizes[k] = acc.value();
  }
  const std::vector<double> sigma_hat = eval_kernel_sequence(kernel, market_sizes);
  const double scale = std::pow(volumes.participation, kernel.rho);
  std::vector<double> ratio(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    ratio[k] = path.impacts[k] / (sigma_hat[k] * scale);
  }
  return ratio;
}

double slow_variation_gap(const ImpactPath& path, double lambda, double s_min) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (path.empty()) throw InvalidArgument("empty path");
  const double s_max = path.cumulative_sizes.back();
  double gap = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double s = path.cumulative_sizes[k];
    if (s < s_min || lambda * s > s_max || lambda * s < path.cumulative_sizes.front()) continue;
    gap = std::max(gap, std::abs(friction_at(path, lambda * s) / path.friction[k] - 1.0));
    any = true;
  }
  if (!any) throw DegenerateWindow("no path point has both S >= s_min and lambda S within the path");
  return gap;
}

std::vector<double> speed_diagnostic(const ImpactPath& path) {
  std::vector<double> out;
  if (path.size() < 2) return out;
  out.reserve(path.size() - 1);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double weight = path.cumulative_sizes[k] / path.volumes[k];
    out.push_back(weight * (path.friction[k - 1] / path.friction[k] - 1.0));
  }
  return out;
}

FrictionAnalysis analyze_friction(const ImpactPath& path, double tail_fraction) {
  if (path.empty()) throw InvalidArgument("empty path");
  FrictionAnalysis analysis;
  const std::span<const double> tail = tail_of(path.friction, tail_fraction);
  analysis.limit_estimate = mean(tail);
  const LimitPoints points = limit_points(path, tail_fraction);
  analysis.tail_liminf = points.liminf;
  analysis.tail_limsup = points.limsup;
  analysis.converged = points.limsup - points.liminf < kConvergenceSpread;
  analysis.divergent = detect_divergence(path, tail_fraction);

  const double s_last = path.cumulative_sizes.back();
  const IndexWindow window = window_for_sizes(path, s_last / 100.0, s_last);
  const bool long_enough = path.size() >= kMinEstimatorLength && window.end - window.begin >= 2 &&
                           path.cumulative_sizes[window.begin] * 10.0 <= s_last;
  if (long_enough) {
    analysis.window_available = true;
    analysis.rho_hat_loglog = rho_loglog(path, window);
    analysis.rho_hat_local = rho_local_estimate(path, tail_fraction);
    try {
      analysis.rho_hat_friction = rho_from_friction(path, tail_fraction);
      analysis.estimators_available = true;
    } catch (const NonEquilibrium&) {
      analysis.estimators_available = false;
    }
  }
  return analysis;
}

}  // namespace impactlab
