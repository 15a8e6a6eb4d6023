#include "hlab/cli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hlab/hermite_sim.hpp"
#include "hlab/kernel_spec.hpp"
#include "hlab/mc_engine.hpp"
#include "hlab/moving_average.hpp"
#include "hlab/rng.hpp"
#include "hlab/special_math.hpp"
#include "hlab/statistics.hpp"

namespace fs = std::filesystem;

namespace hlab::cli {

namespace {

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_manifest(const fs::path& dir, const std::string& sub, const std::string& config_path,
                    const std::string& hash, const std::string& started) {
  nlohmann::json m;
  m["subcommand"] = sub;
  m["config_path"] = config_path;
  m["output_dir"] = dir.string();
  m["config_hash"] = hash;
  m["code_version"] = code_version();
  m["started"] = started;
  m["finished"] = utc_now();
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

ExperimentConfig load_config(const CommonFlags& flags) {
  std::ifstream f(flags.config);
  if (!f) throw ConfigError("cannot open config file '" + flags.config + "'\n");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what() + "\n");
  }
  if (flags.seed) j["seed"] = *flags.seed;
  if (flags.workers) j["workers"] = *flags.workers;
  return config_from_json(j);
}

std::string path_csv(const ProcessPath& path) {
  std::ostringstream os;
  os << "t,value\n";
  for (std::size_t k = 0; k < path.values.size(); ++k) os << fmt(path.time(k)) << ',' << fmt(path.values[k]) << '\n';
  return os.str();
}

struct IdentityRow {
  std::string identity;
  std::string arguments;
  double expected = 0.0;
  double computed = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return error <= tolerance; }
};

std::vector<IdentityRow> identity_suite(const std::vector<double>& extra_h0, std::uint64_t seed,
                                        std::ostream& out) {
  std::vector<IdentityRow> rows;
  std::vector<double> h0s;
  for (int i = 0; i < 9; ++i) h0s.push_back((55.0 + 5.0 * i) / 100.0);
  for (double h : extra_h0) h0s.push_back(h);
  for (std::size_t i = 0; i < h0s.size(); ++i) {
    const double h0 = h0s[i];
    const auto closed = tempered_power_integral(h0);
    const auto est = tempered_power_integral_numeric(h0);
    IdentityRow mod{"oscillatory_integral_modulus", "H0=" + fmt(h0), std::abs(closed), std::abs(est.extrapolated), 0.0,
                    1e-6};
    mod.error = std::abs(mod.computed - mod.expected) / mod.expected;
    IdentityRow arg{"oscillatory_integral_phase", "H0=" + fmt(h0), std::arg(closed), std::arg(est.extrapolated), 0.0,
                    1e-6};
    arg.error = std::abs(arg.computed - arg.expected);
    rows.push_back(mod);
    rows.push_back(arg);
    if (i >= h0s.size() - extra_h0.size())
      out << "oscillatory integral at H0=" << fmt(h0) << ": closed form " << std::setprecision(6) << closed.real()
          << (closed.imag() < 0 ? " - " : " + ") << std::abs(closed.imag()) << " i, numeric "
          << est.extrapolated.real() << (est.extrapolated.imag() < 0 ? " - " : " + ")
          << std::abs(est.extrapolated.imag()) << " i\n";
  }
  Rng rng(stream_seed(seed, 0x6964656eULL, 0));
  for (int i = 0; i < 20; ++i) {
    const double z1 = 5.0 * rng.uniform();
    double z2 = 5.0 * rng.uniform();
    if (std::abs(z1 - z2) < 1e-3) z2 += 0.5;
    const double h0 = 0.55 + 0.4 * rng.uniform();
    IdentityRow r{"beta_convolution", "z1=" + fmt(z1) + ";z2=" + fmt(z2) + ";H0=" + fmt(h0),
                  beta_convolution_identity(z1, z2, h0), beta_convolution_numeric(z1, z2, h0).value, 0.0, 1e-8};
    r.error = std::abs(r.computed - r.expected) / std::abs(r.expected);
    rows.push_back(r);
  }
  for (int q = 1; q <= 3; ++q)
    for (double H : {0.8, 0.9}) {
      const auto p = derive_params(q, H);
      for (double theta : {0.5, 1.0, 2.0}) {
        const double alpha = limit_exponent(p);
        const double closed = limit_prefactor(p) * std::tgamma(alpha + 1.0) / std::pow(theta, alpha + 2.0);
        const double computed = limit_constant_b(p, without_closed_forms(exponential_kernel(theta)));
        IdentityRow r{"limit_constant_exp_kernel", "q=" + std::to_string(q) + ";H=" + fmt(H) + ";theta=" + fmt(theta),
                      closed, computed, std::abs(computed - closed) / closed, 1e-6};
        rows.push_back(r);
      }
    }
  return rows;
}

int cmd_identities(const std::vector<double>& h0, std::uint64_t seed, const std::string& outdir, std::ostream& out) {
  const std::string started = utc_now();
  const auto rows = identity_suite(h0, seed, out);
  fs::create_directories(outdir);
  std::ostringstream csv;
  csv << "identity,arguments,expected,computed,error,tolerance,status\n";
  int failures = 0;
  for (const auto& r : rows) {
    csv << r.identity << ',' << r.arguments << ',' << fmt(r.expected) << ',' << fmt(r.computed) << ','
        << fmt(r.error) << ',' << fmt(r.tolerance) << ',' << (r.pass() ? "pass" : "FAIL") << '\n';
    if (!r.pass()) {
      ++failures;
      out << "FAIL " << r.identity << " (" << r.arguments << "): error " << r.error << " > " << r.tolerance << '\n';
    }
  }
  write_file(fs::path(outdir) / "identities.csv", csv.str());
  write_manifest(outdir, "identities", "", "", started);
  out << rows.size() - static_cast<std::size_t>(failures) << "/" << rows.size() << " identities pass\n";
  return failures == 0 ? kSuccess : kAcceptanceFailure;
}

int cmd_simulate(const CommonFlags& flags, std::ostream& out) {
  const std::string started = utc_now();
  const ExperimentConfig cfg = load_config(flags);
  const HurstParams p = cfg.params();
  const KernelSpec x = parse_kernel(cfg.kernel);
  const auto adm = check_admissible(x, p);
  if (!adm.accepted()) throw ConfigError("kernel not admissible: " + adm.clause + "\n");
  const double horizon = cfg.T_ladder.back() * cfg.t;
  const auto n = static_cast<std::size_t>(std::llround(horizon * static_cast<double>(cfg.grid)));
  HermiteRankOptions sim;
  sim.refine = cfg.refine;
  sim.driver = cfg.driver;
  const HermiteRankSimulator driver(p, n, horizon, sim);
  Rng rng(stream_seed(cfg.seed, std::bit_cast<std::uint64_t>(cfg.T_ladder.back()), 0));
  ProcessPath Z = driver.sample(rng);
  Z.meta.seed = cfg.seed;
  const ProcessPath X = build_ma_path(x, Z);
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "driver.csv", path_csv(Z));
  write_file(fs::path(flags.out) / "moving_average.csv", path_csv(X));
  write_manifest(flags.out, "simulate", flags.config, config_hash(cfg), started);
  out << "wrote " << n + 1 << " points per path to " << flags.out << '\n';
  return kSuccess;
}

int cmd_sweep(const CommonFlags& flags, std::ostream& out) {
  const std::string started = utc_now();
  const ExperimentConfig cfg = load_config(flags);
  const MCResult res = run_experiment(cfg);
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "result.json", to_json(res).dump(2) + "\n");
  write_file(fs::path(flags.out) / "rungs.csv", rung_csv(res));
  write_file(fs::path(flags.out) / "sweep_long.csv", long_csv(res));
  write_manifest(flags.out, "sweep", flags.config, res.config_hash, started);
  for (const auto& g : res.rungs) {
    if (!g.error.empty()) {
      out << g.error << '\n';
      continue;
    }
    out << "T=" << g.T << " var=" << g.variance.value << " +- " << g.variance.se << " target=" << g.target;
    if (g.gaussian_variance) out << " gaussian=" << *g.gaussian_variance;
    out << '\n';
  }
  return kSuccess;
}

int cmd_compare(const CommonFlags& flags, bool self_compare, std::ostream& out) {
  const std::string started = utc_now();
  ExperimentConfig cfg = load_config(flags);
  if (cfg.comparison == Comparison::variance)
    throw ConfigError("compare needs comparison = ks or cumulants\n");
  if (self_compare) cfg.comparison = Comparison::variance;
  const MCResult res = run_experiment(cfg);
  nlohmann::json report = to_json(res);
  std::ostringstream csv;
  csv << "T,population,n,k2,k2_se,k3,k3_se,ks_statistic,ks_p\n";
  for (std::size_t i = 0; i < res.rungs.size(); ++i) {
    const auto& g = res.rungs[i];
    if (!g.error.empty()) continue;
    if (self_compare) {
      const std::size_t half = g.samples.size() / 2;
      const std::span<const double> all(g.samples);
      const auto a = all.first(half);
      const auto b = all.subspan(half);
      const auto ks = stats::ks_two_sample(a, b);
      report["rungs"][i]["self_ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}};
      for (int part = 0; part < 2; ++part) {
        const auto s = part == 0 ? a : b;
        const auto k2 = stats::sample_cumulant(s, 2);
        const auto k3 = stats::sample_cumulant(s, 3);
        csv << fmt(g.T) << ',' << (part == 0 ? "first_half" : "second_half") << ',' << s.size() << ','
            << fmt(k2.value) << ',' << fmt(k2.se) << ',' << fmt(k3.value) << ',' << fmt(k3.se) << ','
            << fmt(ks.statistic) << ',' << fmt(ks.p_value) << '\n';
      }
      out << "T=" << g.T << " self-comparison KS p=" << ks.p_value << '\n';
      continue;
    }
    csv << fmt(g.T) << ",G_T," << g.paths << ',' << fmt(g.variance.value) << ',' << fmt(g.variance.se) << ','
        << fmt(g.k3->value) << ',' << fmt(g.k3->se) << ',' << fmt(g.ks->statistic) << ',' << fmt(g.ks->p_value)
        << '\n';
    csv << fmt(g.T) << ",reference," << g.paths << ',' << fmt(g.reference_k2->value) << ','
        << fmt(g.reference_k2->se) << ',' << fmt(g.reference_k3->value) << ',' << fmt(g.reference_k3->se) << ','
        << fmt(g.ks->statistic) << ',' << fmt(g.ks->p_value) << '\n';
    out << "T=" << g.T << " KS D=" << g.ks->statistic << " p=" << g.ks->p_value << " k3=" << g.k3->value
        << " (reference " << g.reference_k3->value << ")\n";
  }
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / "compare.json", report.dump(2) + "\n");
  write_file(fs::path(flags.out) / "compare.csv", csv.str());
  write_manifest(flags.out, "compare", flags.config, res.config_hash, started);
  return kSuccess;
}

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", flags.out, "Output directory");
  sub->add_option("--seed", flags.seed, "Override the config seed");
  sub->add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermite moving-average simulation and verification"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* ident = app.add_subcommand("identities", "Check the closed-form identities on parameter grids");
  std::vector<double> h0;
  std::uint64_t ident_seed = 20240601;
  std::string ident_out = "out/identities";
  ident->add_option("--h0", h0, "Extra H0 values for the oscillatory integral")->check(CLI::Range(0.5001, 0.9999));
  ident->add_option("--seed", ident_seed, "Seed of the random beta-identity triples");
  ident->add_option("--out", ident_out, "Output directory");

  auto* simulate = app.add_subcommand("simulate", "Write one driver path and its moving average");
  add_common(simulate, flags);
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo variance ladder of G_T");
  add_common(sweep, flags);
  auto* compare = app.add_subcommand("compare", "Compare G_T samples with the scaled Rosenblatt law");
  add_common(compare, flags);
  bool self_compare = false;
  compare->add_flag("--self", self_compare, "Compare two halves of the same G_T sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kSuccess : kUsageError;
  }
  try {
    if (*ident) return cmd_identities(h0, ident_seed, ident_out, out);
    if (*simulate) return cmd_simulate(flags, out);
    if (*sweep) return cmd_sweep(flags, out);
    if (*compare) return cmd_compare(flags, self_compare, out);
  } catch (const ConfigError& e) {
    err << "config error:\n" << e.what();
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace hlab::cli
