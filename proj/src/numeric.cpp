#include "impactlab/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "impactlab/errors.hpp"

namespace impactlab {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InvalidArgument("mean of an empty sequence");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  CompensatedSum acc;
  for (double x : xs) acc.add((x - m) * (x - m));
  return acc.value() / static_cast<double>(xs.size() - 1);
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw InvalidArgument("median of an empty sequence");
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DegenerateWindow("least squares needs at least two paired points");
  }
  const double mx = mean(xs);
  const double my = mean(ys);
  CompensatedSum sxx;
  CompensatedSum sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    sxx.add(dx * dx);
    sxy.add(dx * (ys[i] - my));
  }
  if (!(sxx.value() > 0.0)) throw DegenerateWindow("regressor has zero variance");
  LinearFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::size_t tail_begin(std::size_t n, double fraction) {
  if (n == 0) return 0;
  if (!(fraction > 0.0) || fraction > 1.0) throw InvalidArgument("tail fraction must be in (0, 1]");
  auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  keep = std::clamp<std::size_t>(keep, 1, n);
  return n - keep;
}

}  // namespace impactlab
