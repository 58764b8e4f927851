#pragma once

namespace impactlab {

// Exponential integral Ei(x) = -int_{-x}^{inf} e^{-u}/u du on the negative
// axis. Power series for |x| <= 5, Lentz continued fraction beyond.
// Throws DomainError for x >= 0.
double exp_integral_ei(double x);

// e^z * E1(z) for z > 0, where E1(z) = -Ei(-z). Stays finite for large z,
// where e^z alone would overflow.
double scaled_exp_integral_e1(double z);

}  // namespace impactlab
