#include "hlab/quadratic_functional.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "hlab/moving_average.hpp"
#include "hlab/parallel.hpp"
#include "hlab/quadrature.hpp"
#include "hlab/rng.hpp"

namespace hlab {

CenteringProfile::CenteringProfile(const KernelSpec& x, double H, double delta, std::size_t steps)
    : delta_(delta), values_(steps + 1, 0.0) {
  if (!(delta > 0.0)) throw std::invalid_argument("CenteringProfile: delta must be > 0");
  std::optional<double> plateau;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double s = delta * static_cast<double>(k);
    if (s >= x.support) {
      if (!plateau) plateau = ma_covariance(x, H, x.support, x.support);
      values_[k] = *plateau;
    } else {
      values_[k] = ma_covariance(x, H, s, s);
    }
  }
}

CenteringProfile::CenteringProfile(double delta, std::vector<double> values, Centering kind)
    : delta_(delta), values_(std::move(values)), kind_(kind) {
  if (values_.empty()) throw std::invalid_argument("CenteringProfile: no values");
}

GtSample compute_G(const ProcessPath& X, const CenteringProfile& centering, const HurstParams& p, double t,
                   double T) {
  if (!(T > 0.0) || !(t >= 0.0)) throw std::invalid_argument("compute_G: need T > 0 and t >= 0");
  GtSample g;
  g.T = T;
  g.t = t;
  g.params = p;
  g.seed = X.meta.seed;
  g.centering = centering.kind();
  if (t == 0.0) return g;
  const double span = T * t;
  if (X.delta > span / 256.0 * (1.0 + 1e-12))
    throw std::invalid_argument("compute_G: grid too coarse, need at least 256 steps on [0, T t]");
  if (std::abs(centering.delta() - X.delta) > 1e-12 * X.delta)
    throw std::invalid_argument("compute_G: centring grid does not match the path grid");
  const double steps_real = span / X.delta;
  const auto K = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(K)) > 1e-6)
    throw std::invalid_argument("compute_G: T t is not a multiple of the grid step");
  if (K > X.steps() || K > centering.steps()) throw std::invalid_argument("compute_G: path shorter than T t");
  std::vector<double> f(K + 1);
  for (std::size_t k = 0; k <= K; ++k) f[k] = X.values[k] * X.values[k] - centering[k];
  f[0] *= 0.5;
  f[K] *= 0.5;
  g.value = std::pow(T, -(2.0 * p.H0 - 1.0)) * X.delta * stats::pairwise_sum(f);
  return g;
}

GtSample compute_G(const ProcessPath& X, const KernelSpec& x, const HurstParams& p, double t, double T) {
  const CenteringProfile prof(x, p.H, X.delta, X.steps());
  GtSample g = compute_G(X, prof, p, t, T);
  g.kernel_tag = x.tag;
  return g;
}

double gaussian_case_variance(const KernelSpec& x, double H, double T, double t) {
  if (!(H > 0.75 && H < 1.0)) throw std::domain_error("gaussian_case_variance: needs H in (3/4, 1)");
  if (!(T > 0.0) || !(t >= 0.0)) throw std::invalid_argument("gaussian_case_variance: need T > 0 and t >= 0");
  const double L = T * t;
  if (L == 0.0 || x.l1_norm == 0.0) return 0.0;
  const double S = std::min(x.support, L);
  quad::Options outer_opt, inner_opt;
  outer_opt.rel_tol = 1e-8;
  outer_opt.abs_tol = 1e-13;
  inner_opt.rel_tol = 1e-9;
  inner_opt.abs_tol = 1e-14;

  // Strip 0 <= u < S, u <= s <= L.
  auto strip_inner = [&](double u) {
    const double cuts[] = {S};
    return quad::integrate(
               [&](double s) {
                 const double c = ma_covariance(x, H, s, u);
                 return c * c;
               },
               u, L, inner_opt, cuts)
        .value;
  };
  double total = quad::integrate(strip_inner, 0.0, S, outer_opt).value;

  // S <= u <= s <= L: the covariance depends on s - u only.
  if (L > S) {
    const double alpha = 2.0 * H - 2.0;
    const double pref = H * (2.0 * H - 1.0);
    quad::Options cov_opt;
    cov_opt.rel_tol = 1e-10;
    cov_opt.abs_tol = 1e-15;
    auto stationary = [&](double d) {
      const double c = pref * lagged_double_integral(x, alpha, x.support, x.support, d, cov_opt).value;
      return (L - S - d) * c * c;
    };
    std::vector<double> cuts;
    for (double b = 1.0; b < L - S; b *= 2.0) cuts.push_back(b);
    total += quad::integrate(stationary, 0.0, L - S, outer_opt, cuts).value;
  }
  return std::pow(T, -2.0 * (2.0 * H - 1.0)) * 4.0 * total;
}

GtSimulator::GtSimulator(const HurstParams& p, const KernelSpec& x, double T, double t, double delta,
                         HermiteRankOptions sim)
    : p_(p),
      x_(x),
      T_(T),
      t_(t),
      delta_(delta),
      steps_([&] {
        if (!(T > 0.0) || !(t > 0.0) || !(delta > 0.0))
          throw std::invalid_argument("GtSimulator: need T, t, delta > 0");
        const double r = T * t / delta;
        const auto k = static_cast<std::size_t>(std::llround(r));
        if (std::abs(r - static_cast<double>(k)) > 1e-6)
          throw std::invalid_argument("GtSimulator: T t must be a multiple of delta");
        if (k < 256) throw std::invalid_argument("GtSimulator: grid too coarse, need at least 256 steps on [0, T t]");
        return k;
      }()),
      driver_(p, steps_, T * t, sim),
      centering_(x, p.H, delta, steps_) {}

std::pair<ProcessPath, ProcessPath> GtSimulator::paths(Rng& rng) const {
  ProcessPath Z = driver_.sample(rng);
  ProcessPath X = build_ma_path(x_, Z);
  return {std::move(Z), std::move(X)};
}

double GtSimulator::sample(Rng& rng) const {
  const ProcessPath X = build_ma_path(x_, driver_.sample(rng));
  return compute_G(X, centering_, p_, t_, T_).value;
}

DecayReport chaos_decay_diagnostic(const HurstParams& p, const KernelSpec& x, const std::vector<double>& T_ladder,
                                   std::size_t paths, std::uint64_t seed, const DecayOptions& opt) {
  if (p.q < 2) throw std::invalid_argument("chaos_decay_diagnostic: needs q >= 2");
  if (T_ladder.size() < 2) throw std::invalid_argument("chaos_decay_diagnostic: ladder needs at least two rungs");
  if (!std::is_sorted(T_ladder.begin(), T_ladder.end()) ||
      std::adjacent_find(T_ladder.begin(), T_ladder.end()) != T_ladder.end())
    throw std::invalid_argument("chaos_decay_diagnostic: ladder must be strictly increasing");
  if (paths < 200) throw std::invalid_argument("chaos_decay_diagnostic: needs at least 200 paths per rung");

  DecayReport rep;
  rep.target = opt.target ? *opt.target : std::pow(limit_constant_b(p, x), 2);
  rep.predicted_exponent = -2.0 * (2.0 - 2.0 * p.H0);
  std::vector<std::vector<double>> samples;
  for (double T : T_ladder) {
    const GtSimulator sim(p, x, T, 1.0, opt.delta, opt.sim);
    const std::uint64_t stream = std::bit_cast<std::uint64_t>(T);
    auto g = parallel_map<double>(paths, opt.workers, [&](std::size_t i) {
      Rng rng(stream_seed(seed, stream, i));
      return sim.sample(rng);
    });
    DecayRung r;
    r.T = T;
    r.variance = stats::sample_cumulant(g, 2);
    r.distance = std::abs(r.variance.value - rep.target);
    rep.rungs.push_back(r);
    samples.push_back(std::move(g));
  }
  rep.distances_decreasing = true;
  for (std::size_t i = 1; i < rep.rungs.size(); ++i)
    if (!(rep.rungs[i].distance < rep.rungs[i - 1].distance)) rep.distances_decreasing = false;

  auto slope_of = [&](const std::vector<double>& var) -> std::optional<double> {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < var.size(); ++i) {
      const double d = var[i] - rep.target;
      if (!(std::abs(d) > 0.0)) return std::nullopt;
      lx.push_back(std::log(T_ladder[i]));
      ly.push_back(std::log(std::abs(d)));
    }
    return stats::linear_fit(lx, ly).slope;
  };
  {
    std::vector<double> lx, ly;
    for (const auto& r : rep.rungs) {
      lx.push_back(std::log(r.T));
      ly.push_back(std::log(std::max(r.distance, 1e-300)));
    }
    rep.fit = stats::linear_fit(lx, ly);
  }
  // Bootstrap over paths within each rung.
  Rng boot(stream_seed(seed, 0x626f6f74ULL, 0));
  std::vector<double> slopes;
  std::vector<double> resampled;
  for (std::size_t b = 0; b < opt.bootstrap; ++b) {
    std::vector<double> var;
    for (const auto& g : samples) {
      resampled.resize(g.size());
      for (double& v : resampled) v = g[static_cast<std::size_t>(boot.uniform() * static_cast<double>(g.size())) % g.size()];
      var.push_back(stats::k_statistic(resampled, 2));
    }
    if (auto s = slope_of(var)) slopes.push_back(*s);
  }
  // Signs of var - target must agree across rungs for a log-log slope.
  bool same_side = true;
  for (const auto& r : rep.rungs)
    if ((r.variance.value > rep.target) != (rep.rungs.front().variance.value > rep.target)) same_side = false;
  if (slopes.size() >= 20 && same_side) {
    std::sort(slopes.begin(), slopes.end());
    rep.slope_lo = slopes[static_cast<std::size_t>(0.025 * static_cast<double>(slopes.size()))];
    rep.slope_hi = slopes[static_cast<std::size_t>(0.975 * static_cast<double>(slopes.size() - 1))];
    rep.inconclusive = rep.slope_hi >= 0.0;
    rep.note = rep.inconclusive ? "slope interval includes zero" : "";
  } else {
    rep.note = same_side ? "too few usable bootstrap replicates" : "variance estimates straddle the target";
  }
  return rep;
}

}  // namespace hlab
