#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "impactlab/averaging.hpp"
#include "impactlab/errors.hpp"
#include "impactlab/friction.hpp"
#include "impactlab/generator.hpp"
#include "impactlab/parallel.hpp"
#include "impactlab/relaxation.hpp"
#include "impactlab/rng.hpp"
#include "impactlab/sizes.hpp"

namespace impactlab::cli {
namespace {

constexpr std::uint64_t kMarketVolumeStream = 0x4d56;  // "MV"
constexpr std::uint64_t kPsiStream = 0x5053;           // "PS"
constexpr std::uint64_t kSizeStream = 0x535a;          // "SZ"
constexpr std::uint64_t kNoiseStream = 0x4e53;         // "NS"

ScenarioSpec seeded_spec(const Config& config, std::uint64_t seed) {
  ScenarioSpec spec = config.schedule.spec;
  spec.seed = seed;
  return spec;
}

void write_path_csv(const CommandContext& ctx, const Scenario& sim, const std::vector<double>* regime) {
  const MarketVolumes market = gen_volumes(sim.schedule, ctx.config.schedule.participation,
                                           derive_seed(ctx.header.seed, kMarketVolumeStream),
                                           ctx.config.schedule.volume_noise);
  const ImpactPath& path = sim.path;
  CsvTable table = regime ? CsvTable(ctx.header, {"n", "tau", "Q", "S", "V", "I", "avg_I", "R", "rho_n"})
                          : CsvTable(ctx.header, {"n", "tau", "Q", "S", "V", "I", "avg_I", "R"});
  for (std::size_t k = 0; k < path.size(); ++k) {
    table.cell(static_cast<std::uint64_t>(k + 1))
        .cell(sim.schedule.times[k])
        .cell(path.volumes[k])
        .cell(path.cumulative_sizes[k])
        .cell(market.volumes[k])
        .cell(path.impacts[k])
        .cell(path.avg_impacts[k])
        .cell(path.friction[k]);
    if (regime) table.cell((*regime)[k]);
    table.end_row();
  }
  write_atomic(ctx.dir / "path.csv", table.text());
}

// Grid of distinct integers, roughly geometric between 1 and n_hi.
std::vector<std::uint64_t> integer_grid(std::uint64_t n_hi, std::size_t points) {
  std::vector<std::uint64_t> grid;
  const double step = std::log(static_cast<double>(n_hi)) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const auto n = static_cast<std::uint64_t>(std::llround(std::exp(step * static_cast<double>(i))));
    if (grid.empty() || n > grid.back()) grid.push_back(std::min(n, n_hi));
  }
  return grid;
}

RhoLaw make_law(const RhoLawConfig& rl, const std::string& name) {
  if (name == "dirac") return RhoLaw::dirac(rl.dirac_lambda);
  if (name == "uniform01") return RhoLaw::uniform01();
  if (name == "exponential") return RhoLaw::exponential(rl.exponential_lambda);
  return RhoLaw::empirical(rl.empirical);
}

}  // namespace

int cmd_simulate(const CommandContext& ctx) {
  const Config& c = ctx.config;
  const Scenario sim = gen_equilibrium(seeded_spec(c, ctx.header.seed), c.kernel);
  write_path_csv(ctx, sim, nullptr);

  const FrictionAnalysis a = analyze_friction(sim.path);
  Json doc = json_document(ctx.header);
  doc["n"] = sim.path.size();
  doc["rho"] = c.kernel.rho;
  doc["target_friction"] = 1.0 / (1.0 + c.kernel.rho);
  doc["final_friction"] = sim.path.friction.back();
  doc["tail"] = {{"fraction", 0.2},
                 {"mean", a.limit_estimate},
                 {"liminf", a.tail_liminf},
                 {"limsup", a.tail_limsup}};
  doc["converged"] = a.converged;
  doc["divergent"] = a.divergent;
  doc["rho_hat"] = {
      {"friction", a.estimators_available ? finite_or_null(a.rho_hat_friction) : Json(nullptr)},
      {"loglog", a.window_available ? finite_or_null(a.rho_hat_loglog) : Json(nullptr)},
      {"local", a.window_available ? finite_or_null(a.rho_hat_local) : Json(nullptr)},
  };
  write_json(ctx.dir / "summary.json", doc);
  return kOk;
}

int cmd_noneq(const CommandContext& ctx) {
  const Config& c = ctx.config;
  const Scenario sim = gen_nonequilibrium(seeded_spec(c, ctx.header.seed), c.noneq);
  const std::vector<double> regime = regime_indices(sim.path.size(), c.noneq);
  write_path_csv(ctx, sim, &regime);

  const ImpactPath& path = sim.path;
  const LimitPoints points = limit_points(path, c.noneq_tail_fraction);
  bool hypothesis = true;
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (path.cumulative_sizes[k] * path.impacts[k] < path.cumulative_sizes[k - 1] * path.impacts[k - 1]) {
      hypothesis = false;
    }
  }

  // Per regime block: share of steps where the impact slope delta_k / Q_k
  // falls (concave stretch) or rises (convex stretch).
  Json blocks = Json::array();
  std::size_t begin = 0;
  while (begin < path.size()) {
    std::size_t end = begin + 1;
    while (end < path.size() && regime[end] == regime[begin]) ++end;
    std::size_t falling = 0;
    std::size_t steps = 0;
    for (std::size_t k = std::max<std::size_t>(begin, 1) + 1; k < end; ++k) {
      const double prev = path.increments[k - 1] / path.volumes[k - 1];
      const double next = path.increments[k] / path.volumes[k];
      if (next < prev) ++falling;
      ++steps;
    }
    const double concave = steps ? static_cast<double>(falling) / static_cast<double>(steps) : 0.0;
    blocks.push_back({{"begin", begin + 1},
                      {"end", end},
                      {"rho", regime[begin]},
                      {"concave_fraction", concave},
                      {"shape", steps == 0 ? "short" : (concave >= 0.5 ? "concave" : "convex")}});
    begin = end;
  }

  Json doc = json_document(ctx.header);
  doc["n"] = path.size();
  doc["rho1"] = c.noneq.rho1;
  doc["rho2"] = c.noneq.rho2;
  doc["n0"] = c.noneq.n0;
  doc["growth"] = c.noneq.growth;
  doc["tail_fraction"] = c.noneq_tail_fraction;
  doc["liminf"] = points.liminf;
  doc["limsup"] = points.limsup;
  doc["max_gap"] = points.max_gap;
  doc["expected_liminf"] = 1.0 / (1.0 + c.noneq.rho2);
  doc["expected_limsup"] = 1.0 / (1.0 + c.noneq.rho1);
  doc["equilibrium"] = c.noneq.rho1 == c.noneq.rho2;
  doc["tail_converged"] = points.limsup - points.liminf < 0.02;
  doc["size_times_impact_non_decreasing"] = hypothesis;
  doc["blocks"] = blocks;
  write_json(ctx.dir / "summary.json", doc);
  return kOk;
}

int cmd_psi(const CommandContext& ctx) {
  const RhoLawConfig& rl = ctx.config.rho_law;
  CsvTable table(ctx.header, {"law", "x", "psi", "psi_derivative", "psi_mc", "psi_mc_se", "z"});
  Json laws = Json::array();
  for (std::size_t i = 0; i < rl.laws.size(); ++i) {
    const RhoLaw law = make_law(rl, rl.laws[i]);
    // Common random numbers across the grid: one seed per law.
    const std::uint64_t seed = derive_seed(derive_seed(ctx.header.seed, kPsiStream), i);
    double max_z = 0.0;
    for (std::size_t j = 0; j < rl.x_points; ++j) {
      const double x = rl.x_min + (1.0 - rl.x_min) * static_cast<double>(j) / static_cast<double>(rl.x_points - 1);
      const Estimate exact = psi_estimate(law, x);
      const Estimate mc = psi_mc(law, x, rl.mc_samples, seed, ctx.jobs);
      const double se = std::hypot(mc.std_error, exact.std_error);
      const double z = se > 0.0 ? (mc.value - exact.value) / se : (mc.value == exact.value ? 0.0 : INFINITY);
      max_z = std::max(max_z, std::abs(z));
      table.cell(law.name()).cell(x).cell(exact.value).cell(psi_derivative(law, x)).cell(mc.value).cell(mc.std_error);
      table.cell(z).end_row();
    }
    const Estimate inv = mean_inv_one_plus_rho_estimate(law);
    laws.push_back({{"law", law.name()},
                    {"mean_rho", finite_or_null(mean_rho(law))},
                    {"mean_inv_one_plus_rho", inv.value},
                    {"mean_inv_one_plus_rho_se", inv.std_error},
                    {"max_abs_z", finite_or_null(max_z)},
                    {"within_3se", max_z <= 3.0}});
  }
  write_atomic(ctx.dir / "psi.csv", table.text());
  Json doc = json_document(ctx.header);
  doc["mc_samples"] = rl.mc_samples;
  doc["x_points"] = rl.x_points;
  doc["laws"] = laws;
  write_json(ctx.dir / "summary.json", doc);
  return kOk;
}

int cmd_sizes(const CommandContext& ctx) {
  const SizesConfig& sz = ctx.config.sizes;
  const LengthLaw length(sz.beta, sz.n_max);
  const std::vector<std::uint64_t> grid = integer_grid(sz.hazard_max, 41);

  CsvTable hazard(ctx.header, {"n", "survival", "hazard_ratio", "power_ratio", "abs_gap"});
  double worst_hazard = 0.0;
  for (std::uint64_t n : grid) {
    const double h = length.hazard_ratio(n);
    const double power = std::pow(1.0 + 1.0 / static_cast<double>(n), -sz.beta);
    worst_hazard = std::max(worst_hazard, std::abs(h - power));
    hazard.cell(n).cell(length.survival(n)).cell(h).cell(power).cell(std::abs(h - power)).end_row();
  }
  write_atomic(ctx.dir / "hazard.csv", hazard.text());

  const BracketScan scan = bracket_scan(length, sz.law, grid);
  CsvTable bracket(ctx.header, {"n", "probability", "lower_bound", "upper_bound", "lower_ok", "upper_ok"});
  for (const BracketCheck& b : scan.checks) {
    bracket.cell(b.n).cell(b.probability).cell(b.lower_bound).cell(b.upper_bound).cell(b.lower_ok).cell(b.upper_ok);
    bracket.end_row();
  }
  write_atomic(ctx.dir / "bracket.csv", bracket.text());

  std::vector<double> nus = sz.nu_grid;
  if (nus.empty()) {
    for (double f : {0.5, 0.9, 1.0, 1.1, 2.0}) nus.push_back(f * sz.beta);
  }
  CsvTable moments(ctx.header, {"nu", "exponent", "expected_exponent", "finite", "nu_below_beta"});
  std::size_t agree = 0;
  for (double nu : nus) {
    const MomentFit fit = moment_exponent(nu, sz.beta, sz.law);
    if (fit.finite == (nu < sz.beta)) ++agree;
    moments.cell(nu).cell(fit.exponent).cell(fit.expected).cell(fit.finite).cell(nu < sz.beta).end_row();
  }
  write_atomic(ctx.dir / "moments.csv", moments.text());

  Rng rng = make_rng(ctx.header.seed, kSizeStream);
  std::vector<double> lengths(sz.samples);
  std::vector<double> sizes(sz.samples);
  for (std::size_t i = 0; i < sz.samples; ++i) {
    const std::uint64_t n = length.sample(rng);
    lengths[i] = static_cast<double>(n);
    sizes[i] = sz.law.sample(n, rng);
  }
  Json doc = json_document(ctx.header);
  doc["beta"] = sz.beta;
  doc["n_max"] = sz.n_max;
  doc["constant"] = length.constant();
  doc["max_hazard_gap"] = worst_hazard;
  doc["bracket_burn_in"] = scan.burn_in ? Json(*scan.burn_in) : Json(nullptr);
  doc["moment_verdicts_matching"] = agree;
  doc["moment_verdicts_total"] = nus.size();
  doc["samples"] = sz.samples;
  if (sz.samples >= 100) {
    doc["hill_lengths"] = finite_or_null(hill_tail_index(lengths));
    doc["hill_sizes"] = finite_or_null(hill_tail_index(sizes));
  } else {
    doc["hill_lengths"] = nullptr;
    doc["hill_sizes"] = nullptr;
  }
  write_json(ctx.dir / "summary.json", doc);
  return kOk;
}

int cmd_relax(const CommandContext& ctx) {
  const Config& c = ctx.config;
  const RelaxConfig& rx = c.relaxation;
  const Scenario sim = gen_equilibrium(seeded_spec(c, ctx.header.seed), c.kernel);
  const FairPricing fair = fair_pricing(sim.path, rx.profile);
  const double bound = inverse_G(rx.profile, 0.5);

  CsvTable fair_table(ctx.header, {"R_N", "T_N", "I_N", "avg_I_N", "residual_at_T", "residual_at_inf",
                                   "identity_gap", "T_bound"});
  fair_table.cell(fair.friction).cell(fair.time).cell(fair.peak).cell(fair.average).cell(fair.residual_at_T);
  fair_table.cell(fair.residual_at_inf).cell(fair.residual_at_T - fair.average).cell(bound).end_row();
  write_atomic(ctx.dir / "fair_pricing.csv", fair_table.text());

  NoiseSpec noise{rx.std_scale, derive_seed(ctx.header.seed, kNoiseStream)};
  const RelaxationCurve curve = relax_paths(sim.path, rx.profile, noise, rx.horizon, rx.paths, rx.points, ctx.jobs);
  CsvTable relax(ctx.header, {"t", "G", "G_hat", "residual"});
  for (std::size_t j = 0; j < curve.times.size(); ++j) {
    relax.cell(curve.times[j]).cell(curve.g[j]).cell(curve.g_hat[j]).cell(curve.g[j] * fair.peak).end_row();
  }
  write_atomic(ctx.dir / "relax.csv", relax.text());

  Json doc = json_document(ctx.header);
  doc["alpha"] = rx.profile.alpha;
  doc["family"] = rx.profile.family == RelaxationProfile::Family::Exponential ? "exponential" : "power";
  doc["R_N"] = fair.friction;
  doc["T_N"] = fair.time;
  doc["T_bound"] = bound;
  doc["T_within_bound"] = fair.time <= bound;
  doc["identity_gap"] = fair.residual_at_T - fair.average;
  doc["residual_at_inf_ratio"] = fair.residual_at_inf / fair.peak;
  doc["paths"] = rx.paths;
  doc["std_scale"] = rx.std_scale;
  doc["sup_deviation"] = curve.sup_deviation;
  write_json(ctx.dir / "summary.json", doc);
  return kOk;
}

}  // namespace impactlab::cli
