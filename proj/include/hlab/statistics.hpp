#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hlab::stats {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_sf(double lambda);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value at the
/// effective size nm/(n+m) (Stephens' small-sample correction).
/// Both samples need at least 50 points.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Pairwise (tree) summation in index order.
double pairwise_sum(std::span<const double> v);

double mean(std::span<const double> v);

/// Unbiased k-statistic of order m in {2, 3, 4} with a delete-one
/// jackknife standard error. Needs at least 200 points.
Estimate sample_cumulant(std::span<const double> s, int m);

/// k-statistic without the size floor or the jackknife.
double k_statistic(std::span<const double> s, int m);

Estimate sample_mean(std::span<const double> s);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace hlab::stats
