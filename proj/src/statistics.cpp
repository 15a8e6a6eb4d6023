#include "hlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hlab::stats {

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Theta-function form; converges fast for small lambda.
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    double s = 0.0;
    for (int k = 1; k <= 9; k += 2) s += std::pow(y, k * k);
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 50 || b.size() < 50) throw std::invalid_argument("ks_two_sample: each sample needs at least 50 points");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double ne = n * m / (n + m);
  const double root = std::sqrt(ne);
  KsResult r;
  r.statistic = d;
  r.p_value = d == 0.0 ? 1.0 : kolmogorov_sf((root + 0.12 + 0.11 / root) * d);
  return r;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

namespace {

// k-statistics from power sums of a centred sample.
double k_from_sums(double n, double s1, double s2, double s3, double s4, int m) {
  switch (m) {
    case 2: return (n * s2 - s1 * s1) / (n * (n - 1.0));
    case 3: return (2.0 * s1 * s1 * s1 - 3.0 * n * s1 * s2 + n * n * s3) / (n * (n - 1.0) * (n - 2.0));
    case 4:
      return (-6.0 * std::pow(s1, 4) + 12.0 * n * s1 * s1 * s2 - 3.0 * n * (n - 1.0) * s2 * s2 -
              4.0 * n * (n + 1.0) * s1 * s3 + n * n * (n + 1.0) * s4) /
             (n * (n - 1.0) * (n - 2.0) * (n - 3.0));
    default: throw std::invalid_argument("k-statistic order must be 2, 3 or 4");
  }
}

struct PowerSums {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
};

PowerSums power_sums(std::span<const double> c) {
  std::vector<double> p1(c.begin(), c.end()), p2(c.size()), p3(c.size()), p4(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    p2[i] = c[i] * c[i];
    p3[i] = p2[i] * c[i];
    p4[i] = p2[i] * p2[i];
  }
  return {pairwise_sum(p1), pairwise_sum(p2), pairwise_sum(p3), pairwise_sum(p4)};
}

}  // namespace

double k_statistic(std::span<const double> s, int m) {
  if (m < 2 || m > 4) throw std::invalid_argument("k_statistic: order must be 2, 3 or 4");
  if (s.size() < static_cast<std::size_t>(m)) throw std::invalid_argument("k_statistic: sample too small");
  const double mu = mean(s);
  std::vector<double> c(s.begin(), s.end());
  for (double& v : c) v -= mu;
  const auto ps = power_sums(c);
  return k_from_sums(static_cast<double>(c.size()), ps.s1, ps.s2, ps.s3, ps.s4, m);
}

Estimate sample_cumulant(std::span<const double> s, int m) {
  if (m < 2 || m > 4) throw std::invalid_argument("sample_cumulant: order must be 2, 3 or 4");
  if (s.size() < 200) throw std::invalid_argument("sample_cumulant: need at least 200 points");
  const double mu = mean(s);
  std::vector<double> c(s.begin(), s.end());
  for (double& v : c) v -= mu;
  const auto ps = power_sums(c);
  const double n = static_cast<double>(c.size());
  Estimate e;
  e.value = k_from_sums(n, ps.s1, ps.s2, ps.s3, ps.s4, m);
  // Delete-one jackknife; k-statistics are shift invariant so the full-sample
  // centring is kept for every replicate.
  std::vector<double> loo(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double x = c[i], x2 = x * x;
    loo[i] = k_from_sums(n - 1.0, ps.s1 - x, ps.s2 - x2, ps.s3 - x2 * x, ps.s4 - x2 * x2, m);
  }
  const double lbar = mean(loo);
  for (double& v : loo) v = (v - lbar) * (v - lbar);
  e.se = std::sqrt((n - 1.0) / n * pairwise_sum(loo));
  return e;
}

Estimate sample_mean(std::span<const double> s) {
  if (s.size() < 2) throw std::invalid_argument("sample_mean: need at least 2 points");
  const double mu = mean(s);
  std::vector<double> c(s.begin(), s.end());
  for (double& v : c) v = (v - mu) * (v - mu);
  const double var = pairwise_sum(c) / static_cast<double>(s.size() - 1);
  return {mu, std::sqrt(var / static_cast<double>(s.size()))};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need matching sizes >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return f;
}

}  // namespace hlab::stats
