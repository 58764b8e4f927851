#pragma once

#include <span>
#include <vector>

#include "impactlab/impact_core.hpp"

// Brute-force reference computations. Nothing here calls into the production
// path/kernel code: sums, prefix sums and quadrature are all local, and the
// kernel is only read through its pointwise eta/theta definitions.
namespace impactlab::diagnostics {

// Z_n = (sum_{k<=n} Q_k alpha_k) / (S_n alpha_n) by direct compensated
// summation. Equals R_n when alpha = I.
std::vector<double> brute_force_Z(std::span<const double> volumes, std::span<const double> alpha);

// r_n = (S_n / Q_n) (alpha_{n-1} / alpha_n - 1 + rho Q_n / S_n) with
// alpha_0 = 0, so the first entry is (rho Q_1 / S_1 - 1) S_1 / Q_1.
std::vector<double> ratio_expansion_residual(std::span<const double> volumes, std::span<const double> alpha,
                                             double rho);

// (1 / (x f(x))) int_0^x f(t) dt. Below min(u0, 1) the kernel is an exact
// power and that piece is integrated in closed form; the rest is composite
// 16-point Gauss-Legendre in log t with theta integrated the same way.
double karamata_mean(const ImpactKernel& kernel, double x);

}  // namespace impactlab::diagnostics
