#pragma once

// Test-only reference computations. Deliberately naive: fixed high-resolution
// rules and plain loops, nothing shared with the library code under test.

#include <cmath>
#include <cstddef>
#include <vector>

namespace testsupport {

// Kahan-compensated running sum.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

template <class F>
double trapezoid(F&& f, double a, double b, std::size_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  KahanSum acc;
  acc.add(0.5 * (f(a) + f(b)));
  for (std::size_t i = 1; i < panels; ++i) acc.add(f(a + h * static_cast<double>(i)));
  return acc.sum * h;
}

template <class F>
double simpson(F&& f, double a, double b, std::size_t panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  KahanSum acc;
  acc.add(f(a) + f(b));
  for (std::size_t i = 1; i < panels; ++i) acc.add((i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i)));
  return acc.sum * h / 3.0;
}

// E1(a) = int_a^inf e^{-t}/t dt = int_0^inf exp(-a e^v) dv, a > 0.
inline double e1_by_quadrature(double a) {
  // Integrand is below 1e-300 once a e^v > 700.
  const double v_max = std::log(700.0 / a) + 1.0;
  return simpson([a](double v) { return std::exp(-a * std::exp(v)); }, 0.0, std::max(v_max, 1.0), 400'000);
}

// Ei(x) = -E1(-x) for x < 0.
inline double ei_by_quadrature(double x) { return -e1_by_quadrature(-x); }

// R_n = (sum Q_k I_k) / (S_n I_n) by plain double loops.
inline std::vector<double> friction_by_summation(const std::vector<double>& q, const std::vector<double>& impacts) {
  std::vector<double> r(q.size());
  KahanSum s;
  KahanSum w;
  for (std::size_t k = 0; k < q.size(); ++k) {
    s.add(q[k]);
    w.add(q[k] * impacts[k]);
    r[k] = w.sum / (s.sum * impacts[k]);
  }
  return r;
}

}  // namespace testsupport
