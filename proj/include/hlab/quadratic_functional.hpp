#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hlab/hermite_sim.hpp"
#include "hlab/kernel_spec.hpp"
#include "hlab/process_path.hpp"
#include "hlab/special_math.hpp"
#include "hlab/statistics.hpp"

namespace hlab {

enum class Centering { analytic, empirical };

struct GtSample {
  double T = 0.0;
  double t = 0.0;
  double value = 0.0;
  Centering centering = Centering::analytic;
  HurstParams params;
  std::string kernel_tag;
  std::uint64_t seed = 0;
};

/// E[X_s^2] on the grid s = k * delta, k = 0..steps, from ma_covariance.
/// Beyond the kernel support the second moment no longer depends on s and
/// the value at the support is reused.
class CenteringProfile {
 public:
  CenteringProfile(const KernelSpec& x, double H, double delta, std::size_t steps);
  /// Profile with explicit values (empirical centring, tests).
  CenteringProfile(double delta, std::vector<double> values, Centering kind);

  double delta() const { return delta_; }
  std::size_t steps() const { return values_.size() - 1; }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }
  Centering kind() const { return kind_; }

 private:
  double delta_;
  std::vector<double> values_;
  Centering kind_ = Centering::analytic;
};

/// G_T(t) = T^-(2H0-1) int_0^{Tt} (X_s^2 - E X_s^2) ds, trapezoid rule on
/// the path grid. Rejects grids with fewer than 256 steps on [0, Tt].
GtSample compute_G(const ProcessPath& X, const CenteringProfile& centering, const HurstParams& p, double t,
                   double T);
GtSample compute_G(const ProcessPath& X, const KernelSpec& x, const HurstParams& p, double t, double T);

/// Var G_T(t) for q = 1 from Cov(X_s^2, X_u^2) = 2 Cov(X_s, X_u)^2.
double gaussian_case_variance(const KernelSpec& x, double H, double T, double t);

/// One Monte Carlo draw of G_T(t): Hermite-rank driver on [0, Tt] with
/// step delta, moving average, analytic centring.
class GtSimulator {
 public:
  GtSimulator(const HurstParams& p, const KernelSpec& x, double T, double t, double delta,
              HermiteRankOptions sim = {});

  double sample(Rng& rng) const;
  /// Driver and moving-average paths of one draw.
  std::pair<ProcessPath, ProcessPath> paths(Rng& rng) const;

  double delta() const { return delta_; }
  std::size_t steps() const { return steps_; }
  const CenteringProfile& centering() const { return centering_; }

 private:
  HurstParams p_;
  KernelSpec x_;
  double T_, t_, delta_;
  std::size_t steps_;
  HermiteRankSimulator driver_;
  CenteringProfile centering_;
};

struct DecayRung {
  double T = 0.0;
  stats::Estimate variance;
  double distance = 0.0;  // |variance - target|
};

struct DecayReport {
  double target = 0.0;
  double predicted_exponent = 0.0;  // -2(2 - 2H0)
  std::vector<DecayRung> rungs;
  bool distances_decreasing = false;
  std::optional<stats::LinearFit> fit;  // log distance on log T
  double slope_lo = 0.0, slope_hi = 0.0;  // bootstrap 95% interval
  bool inconclusive = true;
  std::string note;
};

struct DecayOptions {
  double delta = 0.0625;
  std::size_t workers = 1;
  std::size_t bootstrap = 200;
  HermiteRankOptions sim;
  /// Limit variance; defaults to b(H,q)^2 when unset.
  std::optional<double> target;
};

/// Var G_T(1) along a T ladder against its limit, with a log-log slope of
/// the distance to the limit and a bootstrap interval for that slope.
DecayReport chaos_decay_diagnostic(const HurstParams& p, const KernelSpec& x, const std::vector<double>& T_ladder,
                                   std::size_t paths, std::uint64_t seed, const DecayOptions& opt = {});

}  // namespace hlab
