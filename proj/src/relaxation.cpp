#include "impactlab/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "impactlab/errors.hpp"
#include "impactlab/numeric.hpp"
#include "impactlab/parallel.hpp"
#include "impactlab/rng.hpp"

namespace impactlab {
namespace {

constexpr std::size_t kPathsPerChunk = 256;
// Frictions a hair above one come from rounding in <I>_N / I_N.
constexpr double kUnitSlack = 1e-12;

}  // namespace

void RelaxationProfile::validate() const {
  if (!(alpha >= 0.0 && alpha <= 0.5)) throw InvalidArgument("alpha must lie in [0, 1/2]");
  switch (family) {
    case Family::Exponential:
      if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be positive");
      break;
    case Family::Power:
      if (!(t0 > 0.0) || !std::isfinite(t0)) throw InvalidArgument("t0 must be positive");
      if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("decay exponent p must be positive");
      break;
  }
}

double eval_G0(const RelaxationProfile& profile, double t) {
  if (!(t >= 0.0)) throw DomainError("relaxation time must be >= 0");
  if (profile.family == RelaxationProfile::Family::Exponential) return std::exp(-t / profile.tau);
  return std::exp(-profile.p * std::log1p(t / profile.t0));
}

double eval_G(const RelaxationProfile& profile, double t) {
  return profile.alpha + (1.0 - profile.alpha) * eval_G0(profile, t);
}

double inverse_G(const RelaxationProfile& profile, double r) {
  if (!(r > profile.alpha)) {
    throw NoFairPricing("G never reaches " + std::to_string(r) + " (long-run level " +
                        std::to_string(profile.alpha) + ")");
  }
  if (r > 1.0 + kUnitSlack) throw DomainError("G^{-1} is defined on (alpha, 1]");
  if (r >= 1.0) return 0.0;
  const double g0 = (r - profile.alpha) / (1.0 - profile.alpha);
  if (profile.family == RelaxationProfile::Family::Exponential) return -profile.tau * std::log(g0);
  return profile.t0 * std::expm1(-std::log(g0) / profile.p);
}

FairPricing fair_pricing(const ImpactPath& path, const RelaxationProfile& profile) {
  if (path.empty()) throw InvalidArgument("empty path");
  profile.validate();
  FairPricing out;
  out.friction = path.friction.back();
  out.peak = path.impacts.back();
  out.average = path.avg_impacts.back();
  out.time = inverse_G(profile, out.friction);
  out.residual_at_T = eval_G(profile, out.time) * out.peak;
  out.residual_at_inf = profile.alpha * out.peak;
  return out;
}

std::vector<double> residual_impact(const ImpactPath& path, const RelaxationProfile& profile,
                                    std::span<const double> times) {
  if (path.empty()) throw InvalidArgument("empty path");
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(eval_G(profile, t) * path.impacts.back());
  return out;
}

RelaxationCurve relax_paths(const ImpactPath& path, const RelaxationProfile& profile, const NoiseSpec& noise,
                            double horizon, std::size_t m, std::size_t points, std::size_t jobs) {
  if (path.empty()) throw InvalidArgument("empty path");
  profile.validate();
  if (m == 0) throw InvalidArgument("need at least one relaxation path");
  if (points < 2 || !(horizon > 0.0)) throw InvalidArgument("relaxation grid needs horizon > 0 and >= 2 points");
  if (!(noise.std_scale >= 0.0)) throw InvalidArgument("noise scale must be >= 0");

  const double peak = path.impacts.back();
  RelaxationCurve curve;
  curve.times.resize(points);
  curve.g.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    curve.times[j] = horizon * static_cast<double>(j) / static_cast<double>(points - 1);
    curve.g[j] = eval_G(profile, curve.times[j]);
  }

  if (noise.std_scale == 0.0) {
    curve.g_hat = curve.g;
    return curve;
  }

  const std::size_t chunks = (m + kPathsPerChunk - 1) / kPathsPerChunk;
  std::vector<std::vector<double>> partial(chunks);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    Rng rng = make_rng(noise.seed, c);
    std::normal_distribution<double> gauss(0.0, noise.std_scale * peak);
    std::vector<CompensatedSum> sums(points);
    const std::size_t count = std::min(kPathsPerChunk, m - c * kPathsPerChunk);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < points; ++j) sums[j].add(peak * curve.g[j] + gauss(rng));
    }
    partial[c].resize(points);
    for (std::size_t j = 0; j < points; ++j) partial[c][j] = sums[j].value();
  });

  curve.g_hat.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    CompensatedSum total;
    for (const auto& chunk : partial) total.add(chunk[j]);
    curve.g_hat[j] = total.value() / static_cast<double>(m) / peak;
    curve.sup_deviation = std::max(curve.sup_deviation, std::abs(curve.g_hat[j] - curve.g[j]));
  }
  return curve;
}

DurationAverage duration_average(std::span<const double> frictions, const RelaxationProfile& profile) {
  if (frictions.empty()) throw InvalidArgument("no frictions to average");
  profile.validate();
  std::vector<double> times(frictions.size());
  for (std::size_t i = 0; i < frictions.size(); ++i) times[i] = inverse_G(profile, frictions[i]);
  DurationAverage out;
  out.samples = frictions.size();
  out.mean_time = mean(times);
  out.mean_friction = mean(frictions);
  out.time_at_mean_friction = inverse_G(profile, out.mean_friction);
  return out;
}

}  // namespace impactlab
