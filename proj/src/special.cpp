#include "impactlab/special.hpp"

#include <cmath>
#include <limits>

#include "impactlab/errors.hpp"

namespace impactlab {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kSeriesLimit = 5.0;
constexpr int kMaxIterations = 1000;

// E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!), 0 < z <= 5.
double e1_series(double z) {
  double term = 1.0;  // (-z)^k / k!
  double sum = 0.0;
  for (int k = 1; k < kMaxIterations; ++k) {
    term *= -z / k;
    const double contribution = term / k;
    sum += contribution;
    if (std::abs(contribution) < 1e-18 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(z) - sum;
}

// e^z E1(z) by the modified Lentz algorithm, z > 5.
double scaled_e1_fraction(double z) {
  constexpr double kTiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  double b = z + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double exp_integral_ei(double x) {
  if (!(x < 0.0)) throw DomainError("Ei is implemented on the negative axis only");
  const double z = -x;
  if (z <= kSeriesLimit) return -e1_series(z);
  return -scaled_e1_fraction(z) * std::exp(-z);
}

double scaled_exp_integral_e1(double z) {
  if (!(z > 0.0)) throw DomainError("E1 needs a positive argument");
  if (z <= kSeriesLimit) return std::exp(z) * e1_series(z);
  return scaled_e1_fraction(z);
}

}  // namespace impactlab
