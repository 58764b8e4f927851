#include "impactlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "impactlab/errors.hpp"

namespace impactlab {
namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
  double tol;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw QuadratureError("integrand is not finite");
  return y;
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& options) {
  QuadratureResult result;
  if (a == b) return result;
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  const double fa = checked(f, a);
  const double fb = checked(f, b);
  const double m = 0.5 * (a + b);
  const double fm = checked(f, m);
  const double whole = simpson(a, b, fa, fm, fb);

  // Coarse 17-point composite estimate sets the scale of the tolerance.
  double scale = 0.0;
  {
    constexpr int kPanels = 8;
    const double h = (b - a) / kPanels;
    for (int i = 0; i < kPanels; ++i) {
      const double x0 = a + i * h;
      scale += simpson(x0, x0 + h, checked(f, x0), checked(f, x0 + 0.5 * h), checked(f, x0 + h));
    }
    scale = std::abs(scale);
  }
  const double tol = std::max(options.relative_tolerance * scale, options.absolute_tolerance);

  std::vector<Panel> stack;
  stack.push_back({a, m, b, fa, fm, fb, whole, tol});
  double total = 0.0;
  double error = 0.0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = checked(f, lm);
    const double frm = checked(f, rm);
    const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
    const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    const bool too_narrow = p.m <= p.a || p.b <= p.m;
    if (std::abs(delta) <= 15.0 * p.tol || too_narrow) {
      total += left + right + delta / 15.0;
      error += std::abs(delta) / 15.0;
      continue;
    }
    if (++result.subdivisions > options.max_subdivisions) {
      throw QuadratureError("adaptive Simpson exceeded its subdivision budget");
    }
    stack.push_back({p.a, lm, p.m, p.fa, flm, p.fm, left, 0.5 * p.tol});
    stack.push_back({p.m, rm, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol});
  }
  result.value = sign * total;
  result.error_estimate = error;
  return result;
}

}  // namespace impactlab
