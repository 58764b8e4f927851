#pragma once

#include <cstddef>
#include <functional>

namespace impactlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
};

struct QuadratureOptions {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-300;
  std::size_t max_subdivisions = 1'000'000;
};

/// Adaptive Simpson quadrature of f over [a, b] (a > b allowed, sign flips).
///
/// The tolerance is taken relative to a first coarse estimate of the whole
/// integral and split between halves as the interval is refined. Raises
/// QuadratureError when the subdivision budget is exhausted or the integrand
/// returns a non-finite value.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& options = {});

}  // namespace impactlab
