#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace impactlab {

// Kahan-Babuska (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;
double mean(std::span<const double> xs);
// Unbiased sample variance; zero for fewer than two values.
double sample_variance(std::span<const double> xs);
double median(std::vector<double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of ys on xs. Throws DegenerateWindow when xs has no
// spread.
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

// Index of the first element of the trailing `fraction` of a sequence of
// length n (at least one element is always kept).
std::size_t tail_begin(std::size_t n, double fraction);

}  // namespace impactlab
