#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace impactlab {

// A metaorder split into child orders: volumes Q_k executed at times tau_k.
struct OrderSchedule {
  int sign = 1;  // +1 buy, -1 sell
  double start_price = 100.0;
  std::vector<double> volumes;
  std::vector<double> times;
  double q_minus = 1.0;
  double q_plus = 1.0;

  std::size_t size() const noexcept { return volumes.size(); }

  // Throws InvalidArgument when any documented invariant is broken
  // (bounds on Q_k, strictly increasing times, sign in {-1,+1}, ...).
  void validate() const;

  // S_1..S_n with compensated accumulation.
  std::vector<double> cumulative_sizes() const;
};

// eta(x) = kappa + a * (1 + log max(x, 1))^(-p); converges to kappa.
struct EtaSpec {
  double kappa = 0.0;
  double a = 0.0;
  double p = 1.0;

  double operator()(double x) const;
};

// theta(u) for u > u0 (zero below the cutoff). Either identically zero, the
// log-decay family b * (1 + log u)^(-p), or a user callable that must be
// bounded and vanish at infinity.
struct ThetaSpec {
  enum class Kind { Zero, LogDecay, Custom };

  Kind kind = Kind::Zero;
  double b = 0.0;
  double p = 1.0;
  std::function<double(double)> custom;

  static ThetaSpec zero() { return {}; }
  static ThetaSpec log_decay(double b, double p = 1.0) { return {Kind::LogDecay, b, p, {}}; }
  static ThetaSpec from_function(std::function<double(double)> fn) {
    return {Kind::Custom, 0.0, 1.0, std::move(fn)};
  }

  // theta(u) ignoring the cutoff.
  double operator()(double u) const;
};

// f(x) = x^rho * exp(eta(x) + int_{u0}^{x} theta(u)/u du).
struct ImpactKernel {
  double rho = 0.5;
  EtaSpec eta;
  ThetaSpec theta;
  double u0 = 1.0;

  static ImpactKernel power(double rho) { return ImpactKernel{rho, {}, {}, 1.0}; }

  void validate() const;
};

// int_{u0}^{x} theta(u)/u du, zero for x <= u0. Closed form for the built-in
// families, adaptive Simpson in log u (relative tolerance 1e-10) otherwise.
double theta_integral(const ImpactKernel& kernel, double x);

// log f(x); finite for every x > 0 unless the kernel is degenerate.
double log_kernel(const ImpactKernel& kernel, double x);

// f(x). Throws DomainError for x <= 0 and KernelOverflow when the result is
// not a finite positive double.
double eval_kernel(const ImpactKernel& kernel, double x);

// f evaluated along a non-decreasing sequence of arguments. Custom theta
// integrals are accumulated piecewise between consecutive points.
std::vector<double> eval_kernel_sequence(const ImpactKernel& kernel, std::span<const double> xs);

struct KernelShape {
  bool non_decreasing = true;
  bool concave = true;
  bool convex = true;
};

// Shape of f on a geometric grid over [x_lo, x_hi], judged from secant slopes
// with a relative tolerance. Slopes on a non-uniform grid are compared
// directly, which is equivalent to second differences on a uniform one.
KernelShape classify_kernel_shape(const ImpactKernel& kernel, double x_lo, double x_hi,
                                  std::size_t points = 400, double tolerance = 1e-12);

struct ImpactPath {
  std::vector<double> volumes;           // Q_k
  std::vector<double> cumulative_sizes;  // S_k
  std::vector<double> impacts;           // I_k
  std::vector<double> avg_impacts;       // <I>_k
  std::vector<double> friction;          // R_k = <I>_k / I_k
  std::vector<double> increments;        // delta_k = I_k - I_{k-1}, I_0 = 0

  std::size_t size() const noexcept { return impacts.size(); }
  bool empty() const noexcept { return impacts.empty(); }
};

// Builds a path from child volumes and impacts. Throws PositivityViolation if
// some I_k <= 0 (or is not finite) and InvalidArgument on mismatched sizes.
ImpactPath make_path(std::span<const double> volumes, std::span<const double> impacts);

ImpactPath impact_path(const OrderSchedule& schedule, const ImpactKernel& kernel);

std::vector<double> incremental_impacts(const ImpactPath& path);

// Index of the first R_n after which the path stays in [0, 1], or size() if
// the last value is outside. Diagnostic for the VWAP constraint.
std::size_t vwap_constraint_onset(const ImpactPath& path);

struct MarketVolumes {
  std::vector<double> volumes;  // V_k >= Q_k
  double participation = 1.0;   // target Q/V

  // Running ratio S_n / (V_1 + ... + V_n).
  std::vector<double> running_participation(std::span<const double> child_volumes) const;
};

}  // namespace impactlab
