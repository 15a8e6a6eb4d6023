#include "hlab/mc_engine.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hlab/chaos.hpp"
#include "hlab/kernel_spec.hpp"
#include "hlab/moving_average.hpp"
#include "hlab/parallel.hpp"
#include "hlab/quadratic_functional.hpp"
#include "hlab/rng.hpp"

namespace hlab {

namespace {

constexpr std::uint64_t kReferenceStream = 0x7265666572656e63ULL;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

const char* code_version() { return "hlab 0.3.0"; }

MCResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const HurstParams p = cfg.params();
  const KernelSpec x = parse_kernel(cfg.kernel);
  const auto adm = check_admissible(x, p);
  if (!adm.accepted()) throw ConfigError("kernel not admissible: " + adm.clause + "\n");

  MCResult res;
  res.config = cfg;
  res.config_hash = config_hash(cfg);
  res.code_version = code_version();
  res.b = limit_constant_b(p, x);
  res.scale = cfg.limit_scale == LimitScale::b ? res.b : p.q * res.b;
  res.Hprime = p.Hprime;
  const double exact_k2 = std::pow(cfg.t, 2.0 * p.Hprime);

  // Reference law b * I2(f) with f the discretized Rosenblatt kernel at t.
  std::optional<chaos::Chaos2Sampler> reference;
  if (cfg.comparison != Comparison::variance) {
    const auto spec = chaos::rosenblatt_spec(p.Hprime);
    const auto kernel = chaos::rosenblatt_kernel(spec, cfg.t, cfg.reference_cells);
    reference.emplace(kernel);
    res.kernel_kappa2 = chaos::chaos2_cumulant_from_eigenvalues(reference->eigenvalues(), 2);
    res.kernel_kappa3 = chaos::chaos2_cumulant_from_eigenvalues(reference->eigenvalues(), 3);
  }

  HermiteRankOptions sim;
  sim.refine = cfg.refine;
  sim.driver = cfg.driver;
  const double delta = 1.0 / static_cast<double>(cfg.grid);
  for (double T : cfg.T_ladder) {
    RungResult rung;
    rung.T = T;
    rung.paths = cfg.paths;
    rung.delta = delta;
    const double k2 = res.kernel_kappa2 ? *res.kernel_kappa2 : exact_k2;
    rung.target = res.scale * res.scale * k2;
    try {
      const GtSimulator gen(p, x, T, cfg.t, delta, sim);
      const std::uint64_t stream = std::bit_cast<std::uint64_t>(T);
      rung.samples = parallel_map<double>(cfg.paths, cfg.workers, [&](std::size_t i) {
        Rng rng(stream_seed(cfg.seed, stream, i));
        return gen.sample(rng);
      });
      rung.mean = stats::sample_mean(rung.samples);
      if (cfg.paths >= 200) {
        rung.variance = stats::sample_cumulant(rung.samples, 2);
        rung.k3 = stats::sample_cumulant(rung.samples, 3);
        rung.k4 = stats::sample_cumulant(rung.samples, 4);
      } else {
        rung.variance = {stats::k_statistic(rung.samples, 2),
                         stats::k_statistic(rung.samples, 2) * std::sqrt(2.0 / static_cast<double>(cfg.paths - 1))};
      }
      if (p.q == 1) rung.gaussian_variance = gaussian_case_variance(x, p.H, T, cfg.t);
      if (reference) {
        const std::uint64_t rstream = kReferenceStream ^ stream;
        auto ref = parallel_map<double>(cfg.paths, cfg.workers, [&](std::size_t i) {
          Rng rng(stream_seed(cfg.seed, rstream, i));
          return res.scale * reference->sample(rng);
        });
        rung.reference_k2 = stats::sample_cumulant(ref, 2);
        rung.reference_k3 = stats::sample_cumulant(ref, 3);
        rung.ks = stats::ks_two_sample(rung.samples, ref);
      }
    } catch (const std::exception& e) {
      rung.error = "rung T=" + num(T) + ": " + e.what();
    }
    res.rungs.push_back(std::move(rung));
  }
  return res;
}

nlohmann::json to_json(const MCResult& r) {
  auto est = [](const stats::Estimate& e) { return nlohmann::json{{"value", e.value}, {"se", e.se}}; };
  nlohmann::json j;
  j["config"] = config_to_json(r.config);
  j["provenance"] = {{"config_hash", r.config_hash}, {"code_version", r.code_version}};
  j["b"] = r.b;
  j["scale"] = r.scale;
  j["Hprime"] = r.Hprime;
  if (r.kernel_kappa2) j["kernel_kappa2"] = *r.kernel_kappa2;
  if (r.kernel_kappa3) j["kernel_kappa3"] = *r.kernel_kappa3;
  j["rungs"] = nlohmann::json::array();
  for (const auto& g : r.rungs) {
    nlohmann::json o;
    o["T"] = g.T;
    o["paths"] = g.paths;
    o["delta"] = g.delta;
    o["target"] = g.target;
    if (!g.error.empty()) {
      o["error"] = g.error;
      j["rungs"].push_back(o);
      continue;
    }
    o["mean"] = est(g.mean);
    o["variance"] = est(g.variance);
    if (g.k3) o["k3"] = est(*g.k3);
    if (g.k4) o["k4"] = est(*g.k4);
    if (g.gaussian_variance) o["gaussian_variance"] = *g.gaussian_variance;
    if (g.ks) o["ks"] = {{"statistic", g.ks->statistic}, {"p_value", g.ks->p_value}};
    if (g.reference_k2) o["reference_k2"] = est(*g.reference_k2);
    if (g.reference_k3) o["reference_k3"] = est(*g.reference_k3);
    j["rungs"].push_back(o);
  }
  return j;
}

std::string rung_csv(const MCResult& r) {
  std::ostringstream os;
  os << "T,mean,var,var_se,target,slope\n";
  const RungResult* prev = nullptr;
  for (const auto& g : r.rungs) {
    if (!g.error.empty()) continue;
    double slope = std::nan("");
    if (prev) {
      const double d1 = std::abs(g.variance.value - g.target);
      const double d0 = std::abs(prev->variance.value - prev->target);
      if (d1 > 0.0 && d0 > 0.0) slope = std::log(d1 / d0) / std::log(g.T / prev->T);
    }
    os << num(g.T) << ',' << num(g.mean.value) << ',' << num(g.variance.value) << ',' << num(g.variance.se) << ','
       << num(g.target) << ',' << num(slope) << '\n';
    prev = &g;
  }
  return os.str();
}

std::string long_csv(const MCResult& r) {
  std::ostringstream os;
  os << "series,x,y,y_se\n";
  auto row = [&](const char* s, double x, double y, double se) {
    os << s << ',' << num(x) << ',' << num(y) << ',' << num(se) << '\n';
  };
  for (const auto& g : r.rungs) {
    if (!g.error.empty()) continue;
    row("var_mc", g.T, g.variance.value, g.variance.se);
    row("target", g.T, g.target, 0.0);
    row("mean_mc", g.T, g.mean.value, g.mean.se);
    if (g.gaussian_variance) row("var_gaussian", g.T, *g.gaussian_variance, 0.0);
    if (g.k3) row("k3_mc", g.T, g.k3->value, g.k3->se);
    if (g.k4) row("k4_mc", g.T, g.k4->value, g.k4->se);
    if (g.reference_k2) row("k2_reference", g.T, g.reference_k2->value, g.reference_k2->se);
    if (g.reference_k3) row("k3_reference", g.T, g.reference_k3->value, g.reference_k3->se);
    if (g.ks) {
      row("ks_statistic", g.T, g.ks->statistic, 0.0);
      row("ks_p", g.T, g.ks->p_value, 0.0);
    }
  }
  return os.str();
}

}  // namespace hlab
