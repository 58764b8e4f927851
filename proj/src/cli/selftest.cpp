#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "impactlab/generator.hpp"
#include "impactlab/numeric.hpp"
#include "impactlab/oracle.hpp"

namespace impactlab::cli {
namespace {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

Check within(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, std::abs(value) <= tolerance};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

int cmd_selftest(const CommandContext& ctx) {
  using namespace diagnostics;
  std::vector<Check> checks;

  {
    const std::size_t n = 1000;
    std::vector<double> ones(n, 1.0);
    std::vector<double> linear(n);
    std::vector<double> expected(n);
    for (std::size_t k = 0; k < n; ++k) {
      linear[k] = static_cast<double>(k + 1);
      expected[k] = (static_cast<double>(k) + 2.0) / (2.0 * static_cast<double>(k + 1));
    }
    checks.push_back(within("Z_n = (n+1)/(2n) for alpha_k = k", max_abs_diff(brute_force_Z(ones, linear), expected), 1e-12));
    checks.push_back(within("Z_n = 1 for constant alpha", max_abs_diff(brute_force_Z(ones, ones), ones), 1e-15));
    // alpha_k = e^k: Z_n = e (1 - e^-n) / ((e - 1) n), so Z_n -> 0 like 1.582 / n.
    const std::size_t m = 700;
    std::vector<double> geometric(m);
    for (std::size_t k = 0; k < m; ++k) geometric[k] = std::exp(static_cast<double>(k + 1));
    const std::vector<double> zg = brute_force_Z(std::vector<double>(m, 1.0), geometric);
    const double e = std::exp(1.0);
    checks.push_back(within("Z_100 for alpha_k = e^k vs closed form", zg[99] - e / (e - 1.0) / 100.0, 1e-12));
    checks.push_back(within("Z_700 for alpha_k = e^k vs closed form", zg.back() - e / (e - 1.0) / 700.0, 1e-12));
  }

  checks.push_back(within("karamata_mean(x^0.5) - 2/3", karamata_mean(ImpactKernel::power(0.5), 1e3) - 2.0 / 3.0, 0.0));
  checks.push_back(within("karamata_mean(x) - 1/2", karamata_mean(ImpactKernel::power(1.0), 1e3) - 0.5, 0.0));
  {
    ImpactKernel k = ImpactKernel::power(0.5);
    k.theta = ThetaSpec::log_decay(0.1);
    checks.push_back(within("karamata_mean(log-decay, 1e5) - 2/3", karamata_mean(k, 1e5) - 2.0 / 3.0, 0.01));
  }

  {
    double worst = 0.0;
    for (double rho : {0.0, 0.5, 1.0, 2.0}) {
      for (double b : {0.0, 0.1}) {
        ScenarioSpec spec;
        spec.n = 2000;
        spec.seed = 11;
        ImpactKernel k = ImpactKernel::power(rho);
        if (b != 0.0) k.theta = ThetaSpec::log_decay(b);
        const Scenario sim = gen_equilibrium(spec, k);
        worst = std::max(worst, max_abs_diff(sim.path.friction, brute_force_Z(sim.path.volumes, sim.path.impacts)));
      }
    }
    checks.push_back(within("friction R_n vs brute-force Z_n", worst, 1e-12));
  }

  {
    const std::size_t n = 10'000;
    std::vector<double> ones(n, 1.0);
    std::vector<double> alpha(n);
    for (std::size_t k = 0; k < n; ++k) alpha[k] = std::sqrt(static_cast<double>(k + 1));
    checks.push_back(within("ratio expansion residual, pure power, n = 1e4", ratio_expansion_residual(ones, alpha, 0.5).back(), 1e-4));

    ScenarioSpec spec;
    spec.n = n;
    spec.seed = 12;
    ImpactKernel k = ImpactKernel::power(0.5);
    k.theta = ThetaSpec::log_decay(0.1);
    const Scenario sim = gen_equilibrium(spec, k);
    const std::vector<double> r = ratio_expansion_residual(sim.path.volumes, sim.path.impacts, 0.5);
    std::vector<double> tail;
    for (std::size_t i = tail_begin(r.size(), 0.2); i < r.size(); ++i) tail.push_back(std::abs(r[i]));
    checks.push_back(within("ratio expansion residual, log-decay theta, tail median", median(tail), 0.01));
  }

  bool all = true;
  Json results = Json::array();
  for (const Check& c : checks) {
    all = all && c.passed;
    ctx.log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << format_number(c.value)
            << " (tolerance " << format_number(c.tolerance) << ")\n";
    results.push_back({{"name", c.name}, {"value", finite_or_null(c.value)}, {"tolerance", c.tolerance},
                       {"passed", c.passed}});
  }
  Json doc = json_document(ctx.header);
  doc["passed"] = all;
  doc["checks"] = results;
  write_json(ctx.dir / "selftest.json", doc);
  return all ? kOk : kSelftestFailure;
}

}  // namespace impactlab::cli
