#include "impactlab/impact_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "impactlab/errors.hpp"
#include "impactlab/numeric.hpp"
#include "impactlab/quadrature.hpp"

namespace impactlab {
namespace {

// int_{lo}^{hi} theta(u)/u du for the custom family, in the variable v = log u.
double custom_theta_piece(const ThetaSpec& theta, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  auto integrand = [&theta](double v) { return theta.custom(std::exp(v)); };
  QuadratureOptions options;
  options.relative_tolerance = 1e-10;
  options.absolute_tolerance = 1e-300;
  options.max_subdivisions = 1'000'000;
  return adaptive_simpson(integrand, std::log(lo), std::log(hi), options).value;
}

// b * int_{L0}^{L} (1 + v)^(-p) dv with L = log x, L0 = log u0.
double log_decay_integral(double b, double p, double u0, double x) {
  const double upper = std::log1p(std::log(x));
  const double lower = std::log1p(std::log(u0));
  const double one_minus_p = 1.0 - p;
  if (std::abs(one_minus_p) < 1e-12) return b * (upper - lower);
  return b * (std::expm1(one_minus_p * upper) - std::expm1(one_minus_p * lower)) / one_minus_p;
}

}  // namespace

void OrderSchedule::validate() const {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  if (!(start_price > 0.0) || !std::isfinite(start_price)) {
    throw InvalidArgument("start price must be positive");
  }
  if (!(q_minus > 0.0) || !(q_plus >= q_minus) || !std::isfinite(q_plus)) {
    throw InvalidArgument("child volume bounds must satisfy 0 < q_minus <= q_plus < inf");
  }
  if (volumes.empty()) throw InvalidArgument("schedule has no child orders");
  if (times.size() != volumes.size()) throw InvalidArgument("times and volumes differ in length");
  for (std::size_t k = 0; k < volumes.size(); ++k) {
    if (!(volumes[k] >= q_minus && volumes[k] <= q_plus)) {
      throw InvalidArgument("child volume " + std::to_string(k + 1) + " outside [q_minus, q_plus]");
    }
    if (!(times[k] >= 0.0) || !std::isfinite(times[k])) {
      throw InvalidArgument("execution times must be finite and non-negative");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw InvalidArgument("execution times must be strictly increasing");
    }
  }
}

std::vector<double> OrderSchedule::cumulative_sizes() const {
  std::vector<double> sizes;
  sizes.reserve(volumes.size());
  CompensatedSum acc;
  for (double q : volumes) {
    acc.add(q);
    sizes.push_back(acc.value());
  }
  return sizes;
}

double EtaSpec::operator()(double x) const {
  if (a == 0.0) return kappa;
  return kappa + a * std::pow(1.0 + std::log(std::max(x, 1.0)), -p);
}

double ThetaSpec::operator()(double u) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::LogDecay:
      return b * std::pow(1.0 + std::log(u), -p);
    case Kind::Custom:
      return custom(u);
  }
  return 0.0;
}

void ImpactKernel::validate() const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw InvalidArgument("rho must be finite and >= 0");
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw InvalidArgument("theta cutoff u0 must be positive");
  if (!std::isfinite(eta.kappa) || !std::isfinite(eta.a)) throw InvalidArgument("eta must be bounded");
  if (eta.a != 0.0 && !(eta.p > 0.0)) throw InvalidArgument("eta decay exponent must be positive");
  switch (theta.kind) {
    case ThetaSpec::Kind::Zero:
      break;
    case ThetaSpec::Kind::LogDecay:
      if (!std::isfinite(theta.b)) throw InvalidArgument("theta amplitude must be finite");
      if (!(theta.p > 0.0)) throw InvalidArgument("theta decay exponent must be positive");
      // (1 + log u) must stay positive on (u0, inf) for the family to be bounded.
      if (!(std::log(u0) > -1.0)) throw InvalidArgument("log-decay theta needs u0 > 1/e");
      break;
    case ThetaSpec::Kind::Custom:
      if (!theta.custom) throw InvalidArgument("custom theta has no function");
      break;
  }
}

double theta_integral(const ImpactKernel& kernel, double x) {
  if (!(x > kernel.u0)) return 0.0;
  switch (kernel.theta.kind) {
    case ThetaSpec::Kind::Zero:
      return 0.0;
    case ThetaSpec::Kind::LogDecay:
      if (kernel.theta.b == 0.0) return 0.0;
      return log_decay_integral(kernel.theta.b, kernel.theta.p, kernel.u0, x);
    case ThetaSpec::Kind::Custom:
      return custom_theta_piece(kernel.theta, kernel.u0, x);
  }
  return 0.0;
}

double log_kernel(const ImpactKernel& kernel, double x) {
  if (!(x > 0.0)) throw DomainError("impact kernel is defined for x > 0 only");
  const double power = kernel.rho == 0.0 ? 0.0 : kernel.rho * std::log(x);
  return power + kernel.eta(x) + theta_integral(kernel, x);
}

namespace {

double checked_exp(double log_value, double x) {
  const double value = std::exp(log_value);
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw KernelOverflow("kernel value not representable at x = " + std::to_string(x));
  }
  return value;
}

}  // namespace

double eval_kernel(const ImpactKernel& kernel, double x) {
  if (!(x > 0.0)) throw DomainError("impact kernel is defined for x > 0 only");
  // Pure powers go through pow so that exact cases (4^0.5 = 2) stay exact.
  if (kernel.theta.kind == ThetaSpec::Kind::Zero && kernel.eta.a == 0.0 && kernel.eta.kappa == 0.0) {
    const double value = std::pow(x, kernel.rho);
    if (!std::isfinite(value) || !(value > 0.0)) {
      throw KernelOverflow("x^rho not representable at x = " + std::to_string(x));
    }
    return value;
  }
  return checked_exp(log_kernel(kernel, x), x);
}

std::vector<double> eval_kernel_sequence(const ImpactKernel& kernel, std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  if (kernel.theta.kind != ThetaSpec::Kind::Custom) {
    for (double x : xs) out.push_back(eval_kernel(kernel, x));
    return out;
  }
  double integral = 0.0;
  double reached = kernel.u0;
  for (double x : xs) {
    if (!(x > 0.0)) throw DomainError("impact kernel is defined for x > 0 only");
    if (x > reached) {
      integral += custom_theta_piece(kernel.theta, reached, x);
      reached = x;
    } else if (x < reached && x > kernel.u0) {
      throw InvalidArgument("kernel sequence arguments must be non-decreasing");
    }
    const double power = kernel.rho == 0.0 ? 0.0 : kernel.rho * std::log(x);
    const double theta_part = x > kernel.u0 ? integral : 0.0;
    out.push_back(checked_exp(power + kernel.eta(x) + theta_part, x));
  }
  return out;
}

KernelShape classify_kernel_shape(const ImpactKernel& kernel, double x_lo, double x_hi,
                                  std::size_t points, double tolerance) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo) || points < 3) {
    throw InvalidArgument("shape grid needs 0 < x_lo < x_hi and at least 3 points");
  }
  std::vector<double> xs(points);
  const double step = std::log(x_hi / x_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) xs[i] = x_lo * std::exp(step * static_cast<double>(i));
  const std::vector<double> fs = eval_kernel_sequence(kernel, xs);

  KernelShape shape;
  std::vector<double> slopes(points - 1);
  for (std::size_t i = 0; i + 1 < points; ++i) {
    slopes[i] = (fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i]);
    if (fs[i + 1] < fs[i] * (1.0 - tolerance)) shape.non_decreasing = false;
  }
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i) {
    const double slack = tolerance * std::max(std::abs(slopes[i]), std::abs(slopes[i + 1]));
    if (slopes[i + 1] > slopes[i] + slack) shape.concave = false;
    if (slopes[i + 1] < slopes[i] - slack) shape.convex = false;
  }
  return shape;
}

ImpactPath make_path(std::span<const double> volumes, std::span<const double> impacts) {
  if (volumes.size() != impacts.size()) throw InvalidArgument("volumes and impacts differ in length");
  if (volumes.empty()) throw InvalidArgument("path needs at least one child order");
  const std::size_t n = volumes.size();
  ImpactPath path;
  path.volumes.assign(volumes.begin(), volumes.end());
  path.impacts.assign(impacts.begin(), impacts.end());
  path.cumulative_sizes.resize(n);
  path.avg_impacts.resize(n);
  path.friction.resize(n);
  path.increments.resize(n);

  CompensatedSum size;
  CompensatedSum weighted;
  double previous = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = volumes[k];
    const double impact = impacts[k];
    if (!(q > 0.0) || !std::isfinite(q)) throw InvalidArgument("child volumes must be positive");
    if (!(impact > 0.0) || !std::isfinite(impact)) {
      throw PositivityViolation("impact I_" + std::to_string(k + 1) + " is not a positive finite value");
    }
    size.add(q);
    weighted.add(q * impact);
    path.cumulative_sizes[k] = size.value();
    path.avg_impacts[k] = weighted.value() / size.value();
    path.friction[k] = path.avg_impacts[k] / impact;
    path.increments[k] = impact - previous;
    previous = impact;
  }
  return path;
}

ImpactPath impact_path(const OrderSchedule& schedule, const ImpactKernel& kernel) {
  schedule.validate();
  kernel.validate();
  const std::vector<double> sizes = schedule.cumulative_sizes();
  const std::vector<double> impacts = eval_kernel_sequence(kernel, sizes);
  return make_path(schedule.volumes, impacts);
}

std::vector<double> incremental_impacts(const ImpactPath& path) { return path.increments; }

std::size_t vwap_constraint_onset(const ImpactPath& path) {
  std::size_t onset = path.size();
  for (std::size_t k = path.size(); k-- > 0;) {
    const double r = path.friction[k];
    if (!(r >= 0.0 && r <= 1.0)) break;
    onset = k;
  }
  return onset;
}

std::vector<double> MarketVolumes::running_participation(std::span<const double> child_volumes) const {
  if (child_volumes.size() != volumes.size()) {
    throw InvalidArgument("market volumes and child volumes differ in length");
  }
  std::vector<double> ratio(volumes.size());
  CompensatedSum executed;
  CompensatedSum market;
  for (std::size_t k = 0; k < volumes.size(); ++k) {
    executed.add(child_volumes[k]);
    market.add(volumes[k]);
    ratio[k] = executed.value() / market.value();
  }
  return ratio;
}

}  // namespace impactlab
