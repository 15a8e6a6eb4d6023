#pragma once

#include <string>

#include "hlab/kernel_spec.hpp"
#include "hlab/process_path.hpp"
#include "hlab/special_math.hpp"

namespace hlab {

struct Admissibility {
  enum class Verdict { accepted, rejected, undetermined };
  Verdict verdict = Verdict::undetermined;
  /// Violated (or unevaluable) condition; empty when accepted.
  std::string clause;
  /// Double integral of |x(u)||x(v)||u-v|^(2H-2), when it was evaluated.
  double norm_integral = 0.0;

  bool accepted() const { return verdict == Verdict::accepted; }
};

/// Integrability of x, finiteness of its |H|-norm integral and the
/// NCLT regime gate (q >= 2, or q = 1 with H > 3/4).
Admissibility check_admissible(const KernelSpec& x, const HurstParams& p);

/// X[k] = sum_{i<k} x((k - i - 1/2) delta) (Z[i+1] - Z[i]), truncated where
/// x vanishes (kernel support).
ProcessPath build_ma_path(const KernelSpec& x, const ProcessPath& Z);

enum class OuScheme {
  /// sigma Z(t) - lambda sigma int_0^t e^(-lambda(t-u)) Z(u) du + xi e^(-lambda t),
  /// with a trapezoid recursion for the Riemann integral.
  integration_by_parts,
  /// Midpoint Riemann-Stieltjes sum, the same rule as build_ma_path.
  midpoint_stieltjes,
};

ProcessPath ou_path(double lambda, double sigma, double xi, const ProcessPath& Z,
                    OuScheme scheme = OuScheme::integration_by_parts);

/// Stationary OU on [0, horizon]. `Z` must cover [-burn, horizon] with
/// burn = burn_steps * delta; the infinite past is replaced by the burn-in
/// segment and the returned path starts at time 0.
ProcessPath stationary_ou_path(double lambda, double sigma, const ProcessPath& Z, std::size_t burn_steps,
                               OuScheme scheme = OuScheme::integration_by_parts);

/// Number of grid steps covering a burn-in of 8 / lambda.
std::size_t ou_burn_steps(double lambda, double delta);

/// Cov(X_s, X_u) = H(2H-1) int_0^s int_0^u x(s-a) x(u-b) |a-b|^(2H-2) da db.
double ma_covariance(const KernelSpec& x, double H, double s, double u);

}  // namespace hlab
