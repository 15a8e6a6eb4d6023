#include "hlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hlab::quad {

namespace {

// 21-point Kronrod rule with its embedded 10-point Gauss rule on [-1, 1],
// stored as (abscissa >= 0, kronrod weight, gauss weight or 0).
struct KronrodTable {
  std::array<double, 11> x{};
  std::array<double, 11> wk{};
  std::array<double, 11> wg{};

  KronrodTable() {
    using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
    using g = boost::math::quadrature::gauss<double, 10>;
    const auto& ax = gk::abscissa();
    const auto& kw = gk::weights();
    const auto& gw = g::weights();
    for (std::size_t i = 0; i < 11; ++i) {
      x[i] = ax[i];
      wk[i] = kw[i];
      wg[i] = (i % 2 == 1) ? gw[i / 2] : 0.0;
    }
  }
};

const KronrodTable& table() {
  static const KronrodTable t;
  return t;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// QUADPACK-style error heuristic for a single GK21 panel.
Panel apply_rule(const Integrand& f, double a, double b) {
  const auto& t = table();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv{};
  fv[0] = f(centre);
  for (std::size_t i = 1; i < 11; ++i) {
    fv[2 * i - 1] = f(centre - half * t.x[i]);
    fv[2 * i] = f(centre + half * t.x[i]);
  }
  double resk = fv[0] * t.wk[0];
  double resg = 0.0;
  double resabs = std::abs(resk);
  for (std::size_t i = 1; i < 11; ++i) {
    const double s = fv[2 * i - 1] + fv[2 * i];
    resk += t.wk[i] * s;
    resg += t.wg[i] * s;
    resabs += t.wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
  }
  const double mean = 0.5 * resk;
  double resasc = t.wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < 11; ++i)
    resasc += t.wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  resk *= half;
  resg *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, resk, err};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opt,
                 std::span<const double> breakpoints) {
  if (!(std::isfinite(a) && std::isfinite(b))) throw std::invalid_argument("integrate: bounds must be finite");
  if (a == b) return {};
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> heap;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = apply_rule(f, cuts[i], cuts[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  std::size_t panels = heap.size();

  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (total_err > target()) {
    if (panels >= opt.max_panels) {
      throw NonConvergence("adaptive quadrature exhausted its panel budget", sign * total, total_err);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in floating point.
      throw NonConvergence("adaptive quadrature hit round-off limit", sign * total, total_err);
    }
    Panel left = apply_rule(f, worst.a, mid);
    Panel right = apply_rule(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum to shed the drift accumulated by the running updates.
  double sum = 0.0, err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sign * sum, err, panels};
}

Result integrate_power_weighted(const Integrand& g, double v0, double v1, double alpha,
                                const Options& opt, std::span<const double> breakpoints) {
  if (!(alpha > -1.0)) throw std::domain_error("integrate_power_weighted: alpha must exceed -1");
  if (!(v0 >= 0.0) || !(v1 >= v0)) throw std::invalid_argument("integrate_power_weighted: need 0 <= v0 <= v1");
  if (v0 == v1) return {};
  if (alpha == 0.0) return integrate(g, v0, v1, opt, breakpoints);
  const double p = 1.0 + alpha;
  const double inv = 1.0 / p;
  const double y0 = std::pow(v0, p);
  const double y1 = std::pow(v1, p);
  std::vector<double> mapped_breaks;
  mapped_breaks.reserve(breakpoints.size());
  for (double b : breakpoints)
    if (b > v0 && b < v1) mapped_breaks.push_back(std::pow(b, p));
  auto mapped = [&](double y) { return g(std::pow(y, inv)) * inv; };
  return integrate(mapped, y0, y1, opt, mapped_breaks);
}

const GaussRule& gauss_legendre_unit(std::size_t order) {
  auto build = [](const auto& abscissa, const auto& weights) {
    GaussRule r;
    // Boost stores the non-negative half of a symmetric rule.
    for (std::size_t i = abscissa.size(); i-- > 0;) {
      if (abscissa[i] == 0.0) continue;
      r.nodes.push_back(0.5 * (1.0 - abscissa[i]));
      r.weights.push_back(0.5 * weights[i]);
    }
    if (abscissa[0] == 0.0) {
      r.nodes.push_back(0.5);
      r.weights.push_back(0.5 * weights[0]);
    }
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (abscissa[i] == 0.0) continue;
      r.nodes.push_back(0.5 * (1.0 + abscissa[i]));
      r.weights.push_back(0.5 * weights[i]);
    }
    return r;
  };
  using boost::math::quadrature::gauss;
  static const GaussRule g4 = build(gauss<double, 4>::abscissa(), gauss<double, 4>::weights());
  static const GaussRule g8 = build(gauss<double, 8>::abscissa(), gauss<double, 8>::weights());
  static const GaussRule g16 = build(gauss<double, 16>::abscissa(), gauss<double, 16>::weights());
  static const GaussRule g32 = build(gauss<double, 32>::abscissa(), gauss<double, 32>::weights());
  switch (order) {
    case 4: return g4;
    case 8: return g8;
    case 16: return g16;
    case 32: return g32;
    default: throw std::invalid_argument("gauss_legendre_unit: unsupported order");
  }
}

}  // namespace hlab::quad
