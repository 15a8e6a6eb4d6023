#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hlab/gaussian_noise.hpp"
#include "hlab/process_path.hpp"
#include "hlab/rng.hpp"
#include "hlab/special_math.hpp"

namespace hlab {

/// Probabilists' Hermite polynomial He_q(x).
double hermite_polynomial(int q, double x);

enum class DriverKind {
  /// xi is fractional Gaussian noise with Hurst index H0.
  fgn,
  /// xi has autocorrelation r_H(k)^(1/q), so He_q(xi) has exactly the
  /// autocorrelation of fGn with index H on the fine lattice.
  matched,
};

struct HermiteRankOptions {
  std::size_t refine = 16;
  DriverKind driver = DriverKind::fgn;
};

/// Z(k * delta) = kappa * sum_{i < k * refine} He_q(xi_i).
///
/// kappa is set from the exact variance of the partial sum over the whole
/// horizon, so Var Z(horizon) = horizon^(2H) holds without asymptotic
/// constants. The fGn embedding is shared by every path.
class HermiteRankSimulator {
 public:
  HermiteRankSimulator(const HurstParams& p, std::size_t n, double horizon, HermiteRankOptions opt = {});

  ProcessPath sample(Rng& rng) const;

  double kappa() const { return kappa_; }
  const EmbeddingInfo& embedding() const { return fgn_.info(); }
  const HurstParams& params() const { return p_; }
  std::size_t steps() const { return n_; }
  double delta() const { return horizon_ / static_cast<double>(n_); }

 private:
  HurstParams p_;
  std::size_t n_;
  double horizon_;
  HermiteRankOptions opt_;
  FgnGenerator fgn_;
  double kappa_ = 0.0;
};

/// Variance of sum_{i<N} He_q(xi_i) for a stationary unit-variance xi with
/// autocorrelation rho: q! * sum_{|k|<N} (N - |k|) rho(k)^q.
double hermite_sum_variance(int q, std::size_t N, const std::function<double(std::size_t)>& rho);

ProcessPath simulate_hermite_path(const HurstParams& p, std::size_t n, double horizon, Rng& rng,
                                  HermiteRankOptions opt = {});

struct DirectOptions {
  /// Growth factor of the cells covering (-reach * horizon, 0).
  double outer_ratio = 1.15;
  /// Left end of the cell grid in units of the horizon. Zero picks the reach
  /// at which the truncated tail carries about 1e-6 of the variance (at most 1e60).
  double outer_reach = 0.0;
  /// Noise cells per output step on [0, horizon].
  std::size_t cells_per_step = 1;
};

/// Discretized multiple Wiener integral of the time kernel
///   c(H,q) int_0^t prod_j (s - xi_j)_+^(H0 - 3/2) ds,   q in {1, 2}.
///
/// White noise is replaced by independent cell averages. With Y(s) the
/// resulting Gaussian field, Z(t) = c int_0^t Y(s) ds for q = 1 and
/// Z(t) = c int_0^t (Y(s)^2 - E Y(s)^2) ds for q = 2. The s-integral uses a
/// 16-point Gauss rule per step, graded toward the left endpoint.
class DirectHermiteSimulator {
 public:
  DirectHermiteSimulator(const HurstParams& p, std::size_t n, double horizon, DirectOptions opt = {});

  ProcessPath sample(Rng& rng) const;

  std::size_t cells() const { return widths_.size(); }
  /// Upper bound on the variance at `horizon` carried by xi < -reach * horizon.
  double tail_variance_bound() const { return tail_bound_; }

 private:
  HurstParams p_;
  std::size_t n_;
  double horizon_;
  std::size_t panels_;
  std::size_t nodes_per_panel_;
  std::vector<double> widths_;
  Eigen::MatrixXd basis_;        // rows: s-nodes, cols: cells (Phi_i(s) / sqrt(h_i))
  Eigen::VectorXd node_weight_;  // quadrature weight times c
  Eigen::VectorXd node_mean_sq_; // E Y(s)^2 at the nodes
  double tail_bound_ = 0.0;
};

ProcessPath simulate_hermite_direct(const HurstParams& p, std::size_t n, double horizon, Rng& rng,
                                    DirectOptions opt = {});

}  // namespace hlab
