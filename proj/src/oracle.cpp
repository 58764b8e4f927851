#include "impactlab/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "impactlab/errors.hpp"

namespace impactlab::diagnostics {
namespace {

struct Neumaier {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

constexpr int kOrder = 16;
constexpr double kPanelWidth = 0.05;  // in log t

struct GaussLegendre {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= kOrder; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (z * p1 - p0) / (z * z - 1.0);
        const double step = p1 / dp;
        z -= step;
        if (std::abs(step) < 1e-16) break;
      }
      nodes[i] = z;
      weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Neumaier acc;
    for (int i = 0; i < kOrder; ++i) acc.add(weights[i] * f(mid + half * nodes[i]));
    return half * acc.value();
  }
};

const GaussLegendre& rule() {
  static const GaussLegendre gl;
  return gl;
}

// theta(e^v) with the cutoff applied.
double theta_at(const ImpactKernel& kernel, double v) {
  const double u = std::exp(v);
  return u > kernel.u0 ? kernel.theta(u) : 0.0;
}

}  // namespace

std::vector<double> brute_force_Z(std::span<const double> volumes, std::span<const double> alpha) {
  if (volumes.size() != alpha.size()) throw InvalidArgument("Q and alpha differ in length");
  std::vector<double> z(volumes.size());
  Neumaier size;
  Neumaier weighted;
  for (std::size_t k = 0; k < volumes.size(); ++k) {
    if (!(alpha[k] > 0.0)) throw InvalidArgument("alpha must be positive");
    size.add(volumes[k]);
    weighted.add(volumes[k] * alpha[k]);
    z[k] = weighted.value() / (size.value() * alpha[k]);
  }
  return z;
}

std::vector<double> ratio_expansion_residual(std::span<const double> volumes, std::span<const double> alpha,
                                             double rho) {
  if (volumes.size() != alpha.size()) throw InvalidArgument("Q and alpha differ in length");
  std::vector<double> r(volumes.size());
  Neumaier size;
  double previous = 0.0;
  for (std::size_t k = 0; k < volumes.size(); ++k) {
    size.add(volumes[k]);
    const double s = size.value();
    const double q = volumes[k];
    // alpha_{n-1} / alpha_n - 1 written as one difference to keep the O(1/n)
    // cancellation against rho Q_n / S_n accurate.
    const double drop = (previous - alpha[k]) / alpha[k];
    r[k] = s / q * (drop + rho * q / s);
    previous = alpha[k];
  }
  return r;
}

double karamata_mean(const ImpactKernel& kernel, double x) {
  if (!(x > 0.0)) throw DomainError("karamata_mean needs x > 0");
  const double rho = kernel.rho;
  // Below min(u0, 1): eta is constant and theta vanishes, so f(t) = c t^rho.
  const double head_end = std::min({kernel.u0, 1.0, x});
  const double eta_x = kernel.eta(x);
  const double eta_head = kernel.eta(head_end);
  if (head_end == x) return 1.0 / (1.0 + rho);
  const bool theta_free = kernel.theta.kind == ThetaSpec::Kind::Zero || x <= kernel.u0;
  if (theta_free && eta_x == eta_head) return 1.0 / (1.0 + rho);

  const GaussLegendre& gl = rule();
  const double v_lo = std::log(head_end);
  const double v_hi = std::log(x);

  std::vector<double> breaks{v_lo};
  const double kink = std::log(std::max(kernel.u0, 1.0));
  const auto add_segment = [&](double a, double b) {
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / kPanelWidth)));
    for (std::size_t i = 1; i <= panels; ++i) breaks.push_back(a + (b - a) * static_cast<double>(i) / panels);
  };
  if (kink > v_lo && kink < v_hi) {
    add_segment(v_lo, kink);
    add_segment(kink, v_hi);
  } else {
    add_segment(v_lo, v_hi);
  }
  breaks.back() = v_hi;

  // tail_theta[i] = int_{breaks[i]}^{v_hi} theta(e^w) dw.
  const std::size_t panels = breaks.size() - 1;
  std::vector<double> tail_theta(breaks.size(), 0.0);
  {
    Neumaier acc;
    for (std::size_t i = panels; i-- > 0;) {
      acc.add(gl.integrate([&](double w) { return theta_at(kernel, w); }, breaks[i], breaks[i + 1]));
      tail_theta[i] = acc.value();
    }
  }

  // f(t) t / (x f(x)) = exp((1 + rho)(v - v_hi) + eta(t) - eta(x) - int_v^{v_hi} theta).
  Neumaier body;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    body.add(gl.integrate(
        [&](double v) {
          const double inner = tail_theta[i + 1] + gl.integrate([&](double w) { return theta_at(kernel, w); }, v, b);
          return std::exp((1.0 + rho) * (v - v_hi) + kernel.eta(std::exp(v)) - eta_x - inner);
        },
        a, b));
  }
  const double head = std::exp((1.0 + rho) * (v_lo - v_hi) + eta_head - eta_x - tail_theta[0]) / (1.0 + rho);
  return head + body.value();
}

}  // namespace impactlab::diagnostics
