#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "impactlab/cli.hpp"
#include "impactlab/errors.hpp"

namespace impactlab::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a finite number, got '" + value + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec == std::errc() && ptr == end) return out;
  // Allow integral scientific notation such as 1e7.
  const double d = to_double(key, value);
  if (d < 0.0 || d != std::floor(d) || d > 9007199254740992.0) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return static_cast<std::uint64_t>(d);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_list(value)) out.push_back(to_double(key, item));
  return out;
}

int to_sign(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "1" || v == "+1" || v == "buy") return 1;
  if (v == "-1" || v == "sell") return -1;
  throw ConfigError(key + ": expected +1/-1/buy/sell, got '" + value + "'");
}

using Setter = std::function<void(const std::string& key, const std::string& value)>;
using Section = std::map<std::string, Setter>;

std::map<std::string, Section> make_setters(Config& c) {
  std::map<std::string, Section> s;
  auto real = [](double& field) { return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); }; };
  auto count = [](std::size_t& field) {
    return [&field](const std::string& k, const std::string& v) { field = static_cast<std::size_t>(to_u64(k, v)); };
  };

  s[""]["seed"] = [&c](const std::string& k, const std::string& v) { c.seed = to_u64(k, v); };

  ScenarioSpec& sc = c.schedule.spec;
  s["schedule"]["n"] = count(sc.n);
  s["schedule"]["q_minus"] = real(sc.q_minus);
  s["schedule"]["q_plus"] = real(sc.q_plus);
  s["schedule"]["volume_law"] = [&sc](const std::string& k, const std::string& v) {
    const std::string law = lower(v);
    if (law == "uniform") {
      sc.volume_law = VolumeLaw::Uniform;
    } else if (law == "constant") {
      sc.volume_law = VolumeLaw::Constant;
    } else {
      throw ConfigError(k + ": expected uniform or constant");
    }
  };
  s["schedule"]["gap_law"] = [&sc](const std::string& k, const std::string& v) {
    const std::string law = lower(v);
    if (law == "fixed") {
      sc.gap_law = GapLaw::Fixed;
    } else if (law == "exponential") {
      sc.gap_law = GapLaw::Exponential;
    } else {
      throw ConfigError(k + ": expected fixed or exponential");
    }
  };
  s["schedule"]["time_gap"] = real(sc.time_gap);
  s["schedule"]["sign"] = [&sc](const std::string& k, const std::string& v) { sc.sign = to_sign(k, v); };
  s["schedule"]["start_price"] = real(sc.start_price);
  s["schedule"]["participation"] = real(c.schedule.participation);
  s["schedule"]["volume_noise"] = real(c.schedule.volume_noise);

  ImpactKernel& k = c.kernel;
  s["kernel"]["rho"] = real(k.rho);
  s["kernel"]["kappa"] = real(k.eta.kappa);
  s["kernel"]["eta_a"] = real(k.eta.a);
  s["kernel"]["eta_p"] = real(k.eta.p);
  s["kernel"]["theta"] = [&k](const std::string& key, const std::string& v) {
    const std::string kind = lower(v);
    if (kind == "zero") {
      k.theta.kind = ThetaSpec::Kind::Zero;
    } else if (kind == "log_decay") {
      k.theta.kind = ThetaSpec::Kind::LogDecay;
    } else {
      throw ConfigError(key + ": expected zero or log_decay");
    }
  };
  s["kernel"]["theta_b"] = real(k.theta.b);
  s["kernel"]["theta_p"] = real(k.theta.p);
  s["kernel"]["u0"] = real(k.u0);

  NonEqSpec& ne = c.noneq;
  s["noneq"]["rho1"] = real(ne.rho1);
  s["noneq"]["rho2"] = real(ne.rho2);
  s["noneq"]["n0"] = count(ne.n0);
  s["noneq"]["growth"] = real(ne.growth);
  s["noneq"]["tail_fraction"] = real(c.noneq_tail_fraction);

  RhoLawConfig& rl = c.rho_law;
  s["rho_law"]["laws"] = [&rl](const std::string&, const std::string& v) {
    rl.laws.clear();
    for (const std::string& item : split_list(v)) rl.laws.push_back(lower(item));
  };
  s["rho_law"]["dirac_lambda"] = real(rl.dirac_lambda);
  s["rho_law"]["exponential_lambda"] = real(rl.exponential_lambda);
  s["rho_law"]["empirical"] = [&rl](const std::string& key, const std::string& v) { rl.empirical = to_doubles(key, v); };
  s["rho_law"]["mc_samples"] = count(rl.mc_samples);
  s["rho_law"]["x_points"] = count(rl.x_points);
  s["rho_law"]["x_min"] = real(rl.x_min);

  SizesConfig& sz = c.sizes;
  s["sizes"]["beta"] = real(sz.beta);
  s["sizes"]["n_max"] = [&sz](const std::string& key, const std::string& v) { sz.n_max = to_u64(key, v); };
  s["sizes"]["gamma"] = real(sz.law.gamma);
  s["sizes"]["variant"] = [&sz](const std::string& key, const std::string& v) {
    const std::string variant = lower(v);
    if (variant == "lower") {
      sz.law.variant = SizeVariant::Lower;
    } else if (variant == "upper") {
      sz.law.variant = SizeVariant::Upper;
    } else {
      throw ConfigError(key + ": expected lower or upper");
    }
  };
  s["sizes"]["q_minus"] = real(sz.law.q_minus);
  s["sizes"]["q_plus"] = real(sz.law.q_plus);
  s["sizes"]["samples"] = count(sz.samples);
  s["sizes"]["nu_grid"] = [&sz](const std::string& key, const std::string& v) { sz.nu_grid = to_doubles(key, v); };
  s["sizes"]["hazard_max"] = [&sz](const std::string& key, const std::string& v) { sz.hazard_max = to_u64(key, v); };

  RelaxConfig& rx = c.relaxation;
  s["relaxation"]["alpha"] = real(rx.profile.alpha);
  s["relaxation"]["family"] = [&rx](const std::string& key, const std::string& v) {
    const std::string family = lower(v);
    if (family == "exponential") {
      rx.profile.family = RelaxationProfile::Family::Exponential;
    } else if (family == "power") {
      rx.profile.family = RelaxationProfile::Family::Power;
    } else {
      throw ConfigError(key + ": expected exponential or power");
    }
  };
  s["relaxation"]["tau"] = real(rx.profile.tau);
  s["relaxation"]["t0"] = real(rx.profile.t0);
  s["relaxation"]["p"] = real(rx.profile.p);
  s["relaxation"]["std_scale"] = real(rx.std_scale);
  s["relaxation"]["paths"] = count(rx.paths);
  s["relaxation"]["horizon"] = real(rx.horizon);
  s["relaxation"]["points"] = count(rx.points);

  s["output"]["dir"] = [&c](const std::string&, const std::string& v) { c.output.dir = v; };
  s["output"]["replicates"] = count(c.output.replicates);
  return s;
}

template <class F>
void checked(const char* section, F&& validate) {
  try {
    validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("[") + section + "] " + e.what());
  }
}

void validate_config(const Config& c) {
  checked("schedule", [&] {
    c.schedule.spec.validate();
    if (!(c.schedule.participation > 0.0 && c.schedule.participation <= 1.0)) {
      throw InvalidArgument("participation must lie in (0, 1]");
    }
    if (!(c.schedule.volume_noise >= 0.0)) throw InvalidArgument("volume_noise must be >= 0");
  });
  checked("kernel", [&] { c.kernel.validate(); });
  checked("noneq", [&] {
    c.noneq.validate();
    if (!(c.noneq_tail_fraction > 0.0 && c.noneq_tail_fraction <= 1.0)) {
      throw InvalidArgument("tail_fraction must lie in (0, 1]");
    }
  });
  checked("rho_law", [&] {
    const RhoLawConfig& rl = c.rho_law;
    if (rl.laws.empty()) throw InvalidArgument("laws must name at least one law");
    for (const std::string& law : rl.laws) {
      if (law == "dirac") {
        RhoLaw::dirac(rl.dirac_lambda);
      } else if (law == "exponential") {
        RhoLaw::exponential(rl.exponential_lambda);
      } else if (law == "empirical") {
        RhoLaw::empirical(rl.empirical);
      } else if (law != "uniform01") {
        throw InvalidArgument("unknown law '" + law + "'");
      }
    }
    if (rl.mc_samples < 2) throw InvalidArgument("mc_samples must be >= 2");
    if (rl.x_points < 2) throw InvalidArgument("x_points must be >= 2");
    if (!(rl.x_min > 0.0 && rl.x_min < 1.0)) throw InvalidArgument("x_min must lie in (0, 1)");
  });
  checked("sizes", [&] {
    const SizesConfig& sz = c.sizes;
    if (!(sz.beta > 0.0)) throw InvalidArgument("beta must be positive");
    if (sz.n_max < 2) throw InvalidArgument("n_max must be >= 2");
    sz.law.validate();
    for (double nu : sz.nu_grid) {
      if (!(nu >= 0.0)) throw InvalidArgument("nu_grid entries must be >= 0");
    }
    if (sz.hazard_max < 1 || sz.hazard_max >= sz.n_max) throw InvalidArgument("hazard_max must lie in [1, n_max)");
  });
  checked("relaxation", [&] {
    const RelaxConfig& rx = c.relaxation;
    rx.profile.validate();
    if (!(rx.std_scale >= 0.0)) throw InvalidArgument("std_scale must be >= 0");
    if (rx.paths < 1) throw InvalidArgument("paths must be >= 1");
    if (!(rx.horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    if (rx.points < 2) throw InvalidArgument("points must be >= 2");
  });
  checked("output", [&] {
    if (c.output.replicates < 1) throw InvalidArgument("replicates must be >= 1");
    if (c.output.dir.empty()) throw InvalidArgument("dir must not be empty");
  });
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string nums(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + num(xs[i]);
  return out;
}

}  // namespace

Config parse_config(std::string_view text) {
  Config config;
  std::map<std::string, Section> setters = make_setters(config);
  std::set<std::string> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find_first_of("#;")));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = lower(trim(std::string_view(line).substr(1, line.size() - 2)));
      if (section.empty() || !setters.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string qualified = section.empty() ? key : section + "." + key;
    const Section& table = setters.at(section);
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(where + "unknown key '" + qualified + "'");
    if (!seen.insert(qualified).second) throw ConfigError(where + "duplicate key '" + qualified + "'");
    if (value.empty()) throw ConfigError(where + "empty value for '" + qualified + "'");
    try {
      it->second(qualified, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  validate_config(config);
  return config;
}

Config load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_config(const Config& c) {
  std::ostringstream o;
  const ScenarioSpec& sc = c.schedule.spec;
  o << "seed=" << c.seed << "\n";
  o << "[schedule]\n"
    << "n=" << sc.n << "\nq_minus=" << num(sc.q_minus) << "\nq_plus=" << num(sc.q_plus)
    << "\nvolume_law=" << (sc.volume_law == VolumeLaw::Uniform ? "uniform" : "constant")
    << "\ngap_law=" << (sc.gap_law == GapLaw::Fixed ? "fixed" : "exponential") << "\ntime_gap=" << num(sc.time_gap)
    << "\nsign=" << sc.sign << "\nstart_price=" << num(sc.start_price)
    << "\nparticipation=" << num(c.schedule.participation) << "\nvolume_noise=" << num(c.schedule.volume_noise)
    << "\n";
  const ImpactKernel& k = c.kernel;
  o << "[kernel]\n"
    << "rho=" << num(k.rho) << "\nkappa=" << num(k.eta.kappa) << "\neta_a=" << num(k.eta.a)
    << "\neta_p=" << num(k.eta.p) << "\ntheta=" << (k.theta.kind == ThetaSpec::Kind::Zero ? "zero" : "log_decay")
    << "\ntheta_b=" << num(k.theta.b) << "\ntheta_p=" << num(k.theta.p) << "\nu0=" << num(k.u0) << "\n";
  o << "[noneq]\n"
    << "rho1=" << num(c.noneq.rho1) << "\nrho2=" << num(c.noneq.rho2) << "\nn0=" << c.noneq.n0
    << "\ngrowth=" << num(c.noneq.growth) << "\ntail_fraction=" << num(c.noneq_tail_fraction) << "\n";
  const RhoLawConfig& rl = c.rho_law;
  o << "[rho_law]\nlaws=";
  for (std::size_t i = 0; i < rl.laws.size(); ++i) o << (i ? "," : "") << rl.laws[i];
  o << "\ndirac_lambda=" << num(rl.dirac_lambda) << "\nexponential_lambda=" << num(rl.exponential_lambda)
    << (rl.empirical.empty() ? "" : "\nempirical=" + nums(rl.empirical))
    << "\nmc_samples=" << rl.mc_samples << "\nx_points=" << rl.x_points
    << "\nx_min=" << num(rl.x_min) << "\n";
  const SizesConfig& sz = c.sizes;
  o << "[sizes]\n"
    << "beta=" << num(sz.beta) << "\nn_max=" << sz.n_max << "\ngamma=" << num(sz.law.gamma)
    << "\nvariant=" << (sz.law.variant == SizeVariant::Lower ? "lower" : "upper") << "\nq_minus=" << num(sz.law.q_minus)
    << "\nq_plus=" << num(sz.law.q_plus) << "\nsamples=" << sz.samples
    << (sz.nu_grid.empty() ? "" : "\nnu_grid=" + nums(sz.nu_grid))
    << "\nhazard_max=" << sz.hazard_max << "\n";
  const RelaxConfig& rx = c.relaxation;
  o << "[relaxation]\n"
    << "alpha=" << num(rx.profile.alpha)
    << "\nfamily=" << (rx.profile.family == RelaxationProfile::Family::Exponential ? "exponential" : "power")
    << "\ntau=" << num(rx.profile.tau) << "\nt0=" << num(rx.profile.t0) << "\np=" << num(rx.profile.p)
    << "\nstd_scale=" << num(rx.std_scale) << "\npaths=" << rx.paths << "\nhorizon=" << num(rx.horizon)
    << "\npoints=" << rx.points << "\n";
  o << "[output]\nreplicates=" << c.output.replicates << "\n";
  return o.str();
}

std::uint64_t config_hash(const Config& config) {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag, const Config& config) {
  if (const char* env = std::getenv("IMPACTLAB_OUT"); env != nullptr && *env != '\0') return env;
  if (flag && !flag->empty()) return *flag;
  return config.output.dir;
}

}  // namespace impactlab::cli
