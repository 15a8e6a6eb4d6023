#pragma once

#include <array>
#include <complex>

#include "hlab/kernel_spec.hpp"
#include "hlab/quadrature.hpp"

namespace hlab {

/// Self-similarity exponents of a Hermite process of order q.
///   H0     = 1 + (H - 1) / q   (exponent of each factor of the time kernel)
///   Hprime = 1 + (2H - 2) / q  (parameter of the limiting Rosenblatt process)
struct HurstParams {
  int q = 1;
  double H = 0.0;
  double H0 = 0.0;
  double Hprime = 0.0;
  /// True when the quadratic functional has a second-chaos limit:
  /// q >= 2 with H in (1/2, 1), or q = 1 with H in (3/4, 1).
  bool nclt = false;
};

HurstParams derive_params(int q, double H);

double beta_fn(double a, double b);

/// Normalising constant of the multiple-integral representation of Z^(q,H).
double hermite_scale_c(const HurstParams& p);

/// H(2H-1) / sqrt((H0 - 1/2)(4H0 - 3)), the kernel-free part of b(H, q).
double limit_prefactor(const HurstParams& p);

/// Exponent (q - 1)(2H0 - 2) of |u - v| in the limit-constant integral.
double limit_exponent(const HurstParams& p);

/// b(H, q) = prefactor * double integral of x(u)x(v)|u-v|^((q-1)(2H0-2)).
/// For q = 1 the exponent vanishes and the integral is (int x)^2 exactly.
/// Throws std::domain_error for inadmissible kernels.
double limit_constant_b(const HurstParams& p, const KernelSpec& x);

/// Closed form beta(H0 - 1/2, 2 - 2H0) |z1 - z2|^(2H0 - 2) of the integral
/// over y of (z1 - y)_+^(H0-3/2) (z2 - y)_+^(H0-3/2).
double beta_convolution_identity(double z1, double z2, double H0);

/// Direct quadrature of the same integral (independent of the beta function).
quad::Result beta_convolution_numeric(double z1, double z2, double H0);

/// Closed form of the improper integral of exp(-iu) u^(H0 - 3/2) over (0, inf).
std::complex<double> tempered_power_integral(double H0);

struct TemperedEstimate {
  std::array<double, 3> eps{};
  std::array<std::complex<double>, 3> tempered{};
  std::complex<double> extrapolated;
};

/// Evaluates the integral with an extra exp(-eps u) factor for eps in
/// {1e-2, 1e-3, 1e-4} and extrapolates to eps = 0 (quadratic Richardson).
TemperedEstimate tempered_power_integral_numeric(double H0);

/// Double integral of x(u)x(v)|u-v|^alpha over [0, upper1] x [0, upper2].
/// Upper bounds may be infinite; they are clipped to the kernel support.
quad::Result singular_double_integral(const KernelSpec& x, double alpha, double upper1, double upper2,
                                      const quad::Options& opt = {});

/// Double integral of x(a)x(b)|shift - (a - b)|^alpha over [0, upper1] x [0, upper2].
/// The diagonal singularity a - b = shift is isolated by the substitution
/// w = a - b before integrating.
quad::Result lagged_double_integral(const KernelSpec& x, double alpha, double upper1, double upper2,
                                    double shift, const quad::Options& opt = {});

}  // namespace hlab
