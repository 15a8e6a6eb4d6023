#include "hlab/special_math.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "hlab/moving_average.hpp"

namespace hlab {

HurstParams derive_params(int q, double H) {
  if (q < 1) throw std::invalid_argument("derive_params: order q must be >= 1, got " + std::to_string(q));
  if (!(H > 0.0 && H < 1.0)) throw std::invalid_argument("derive_params: H must lie in (0, 1)");
  HurstParams p;
  p.q = q;
  p.H = H;
  p.H0 = 1.0 + (H - 1.0) / q;
  p.Hprime = 1.0 + (2.0 * H - 2.0) / q;
  p.nclt = (q >= 2 && H > 0.5) || (q == 1 && H > 0.75);
  return p;
}

double beta_fn(double a, double b) { return boost::math::beta(a, b); }

double hermite_scale_c(const HurstParams& p) {
  if (!(p.H > 0.5 && p.H < 1.0)) throw std::domain_error("hermite_scale_c: H must lie in (1/2, 1)");
  const double bt = beta_fn(p.H0 - 0.5, 2.0 - 2.0 * p.H0);
  const double qfact = std::tgamma(p.q + 1.0);
  return std::sqrt(p.H * (2.0 * p.H - 1.0) / (qfact * std::pow(bt, p.q)));
}

double limit_prefactor(const HurstParams& p) {
  const double d = (p.H0 - 0.5) * (4.0 * p.H0 - 3.0);
  if (!(d > 0.0)) throw std::domain_error("limit_prefactor: needs H0 > 3/4");
  return p.H * (2.0 * p.H - 1.0) / std::sqrt(d);
}

double limit_exponent(const HurstParams& p) { return (p.q - 1) * (2.0 * p.H0 - 2.0); }

double limit_constant_b(const HurstParams& p, const KernelSpec& x) {
  const auto adm = check_admissible(x, p);
  if (adm.verdict != Admissibility::Verdict::accepted)
    throw std::domain_error("limit_constant_b: kernel not admissible (" + adm.clause + ")");
  const double alpha = limit_exponent(p);
  double integral = 0.0;
  if (alpha == 0.0) {
    const double m = kernel_integral(x);
    integral = m * m;
  } else {
    quad::Options opt;
    opt.rel_tol = 1e-11;
    integral = singular_double_integral(x, alpha, x.support, x.support, opt).value;
  }
  return limit_prefactor(p) * integral;
}

double beta_convolution_identity(double z1, double z2, double H0) {
  if (!(z1 >= 0.0 && z2 >= 0.0)) throw std::invalid_argument("beta_convolution_identity: z1, z2 must be >= 0");
  if (!(H0 > 0.5 && H0 < 1.0)) throw std::invalid_argument("beta_convolution_identity: H0 must lie in (1/2, 1)");
  if (z1 == z2) throw std::domain_error("beta_convolution_identity: diverges at z1 == z2");
  return beta_fn(H0 - 0.5, 2.0 - 2.0 * H0) * std::pow(std::abs(z1 - z2), 2.0 * H0 - 2.0);
}

quad::Result beta_convolution_numeric(double z1, double z2, double H0) {
  if (!(z1 >= 0.0 && z2 >= 0.0)) throw std::invalid_argument("beta_convolution_numeric: z1, z2 must be >= 0");
  if (!(H0 > 0.5 && H0 < 1.0)) throw std::invalid_argument("beta_convolution_numeric: H0 must lie in (1/2, 1)");
  if (z1 == z2) throw std::domain_error("beta_convolution_numeric: diverges at z1 == z2");
  // With v = (min(z) - y) / d the integral becomes
  //   d^(2a+1) * int_0^inf v^a (1+v)^a dv,  a = H0 - 3/2.
  // Split at v = 1 and map the tail by v = 1/s.
  const double a = H0 - 1.5;
  const double d = std::abs(z1 - z2);
  quad::Options opt;
  opt.rel_tol = 1e-13;
  auto near = quad::integrate_power_weighted([a](double v) { return std::pow(1.0 + v, a); }, 0.0, 1.0, a, opt);
  auto tail = quad::integrate_power_weighted([a](double s) { return std::pow(1.0 + s, a); }, 0.0, 1.0,
                                             -2.0 * a - 2.0, opt);
  const double scale = std::pow(d, 2.0 * a + 1.0);
  return {scale * (near.value + tail.value), scale * (near.error + tail.error), near.panels + tail.panels};
}

std::complex<double> tempered_power_integral(double H0) {
  if (!(H0 > 0.5 && H0 < 1.0)) throw std::invalid_argument("tempered_power_integral: H0 must lie in (1/2, 1)");
  const double phase = -0.5 * std::numbers::pi * (H0 - 0.5);
  return std::polar(std::tgamma(H0 - 0.5), phase);
}

namespace {

// int_0^inf exp(-eps u) exp(-iu) u^a du by period-wise quadrature.
std::complex<double> tempered_integral(double a, double eps) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  auto head_re = quad::integrate_power_weighted([eps](double u) { return std::exp(-eps * u) * std::cos(u); }, 0.0,
                                                two_pi, a, opt);
  auto head_im = quad::integrate_power_weighted([eps](double u) { return -std::exp(-eps * u) * std::sin(u); }, 0.0,
                                                two_pi, a, opt);
  // Periods beyond 2*pi: the integrand is smooth there, so a fixed 32-point
  // rule per period is exact to rounding. Stop once exp(-eps u) < 1e-19.
  const auto& rule = quad::gauss_legendre_unit(32);
  const auto periods = static_cast<std::size_t>(std::ceil(44.0 / (eps * two_pi)));
  double sum_re = 0.0, sum_im = 0.0, c_re = 0.0, c_im = 0.0;
  auto kahan = [](double& sum, double& comp, double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (std::size_t k = 1; k <= periods; ++k) {
    const double lo = two_pi * static_cast<double>(k);
    double pr = 0.0, pi = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double u = lo + two_pi * rule.nodes[j];
      const double w = rule.weights[j] * std::exp(-eps * u) * std::pow(u, a);
      pr += w * std::cos(u);
      pi -= w * std::sin(u);
    }
    kahan(sum_re, c_re, two_pi * pr);
    kahan(sum_im, c_im, two_pi * pi);
  }
  return {head_re.value + sum_re, head_im.value + sum_im};
}

}  // namespace

TemperedEstimate tempered_power_integral_numeric(double H0) {
  if (!(H0 > 0.5 && H0 < 1.0)) throw std::invalid_argument("tempered_power_integral_numeric: H0 must lie in (1/2, 1)");
  TemperedEstimate est;
  est.eps = {1e-2, 1e-3, 1e-4};
  for (std::size_t i = 0; i < 3; ++i) est.tempered[i] = tempered_integral(H0 - 1.5, est.eps[i]);
  // Quadratic through the three points, evaluated at eps = 0.
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double w = 1.0;
    for (std::size_t k = 0; k < 3; ++k)
      if (k != j) w *= -est.eps[k] / (est.eps[j] - est.eps[k]);
    acc += w * est.tempered[j];
  }
  est.extrapolated = acc;
  return est;
}

quad::Result singular_double_integral(const KernelSpec& x, double alpha, double upper1, double upper2,
                                      const quad::Options& opt) {
  return lagged_double_integral(x, alpha, upper1, upper2, 0.0, opt);
}

quad::Result lagged_double_integral(const KernelSpec& x, double alpha, double upper1, double upper2, double shift,
                                    const quad::Options& opt) {
  if (!(alpha > -1.0 && alpha <= 0.0)) throw std::domain_error("lagged_double_integral: alpha must lie in (-1, 0]");
  if (!x.integrable()) throw std::domain_error("lagged_double_integral: kernel is not integrable");
  if (!(upper1 >= 0.0 && upper2 >= 0.0)) throw std::invalid_argument("lagged_double_integral: negative upper bound");
  const double A = std::min(upper1, x.support);
  const double B = std::min(upper2, x.support);
  if (A <= 0.0 || B <= 0.0) return {};

  quad::Options inner;
  inner.rel_tol = 1e-13;
  inner.abs_tol = 1e-300;
  // K(w) = int x(a) x(a - w) da over a in [0, A], a - w in [0, B].
  auto overlap = [&](double w) {
    const double lo = std::max(0.0, w);
    const double hi = std::min(A, B + w);
    if (!(hi > lo)) return 0.0;
    if (x.overlap) return x.overlap(w, lo, hi);
    std::vector<double> cuts;
    if (w > 0.0) {
      // Integrate in c = a - w so the factor x(c) is evaluated without
      // cancellation when w is large.
      for (double b : x.breakpoints) {
        cuts.push_back(b);
        cuts.push_back(b - w);
      }
      return quad::integrate([&](double c) { return x(c + w) * x(c); }, lo - w, hi - w, inner, cuts).value;
    }
    for (double b : x.breakpoints) {
      cuts.push_back(b);
      cuts.push_back(b + w);
    }
    return quad::integrate([&](double a) { return x(a) * x(a - w); }, lo, hi, inner, cuts).value;
  };

  const double d = shift;
  // Kinks of K plus the kernel's own breakpoints; the latter give long-tailed
  // kernels a geometric panel layout in the lag variable.
  auto lag_cuts = [&](double c1, double c2) {
    std::vector<double> cuts{c1, c2};
    for (double b : x.breakpoints) {
      cuts.push_back(b);
      cuts.push_back(c1 + b);
    }
    return cuts;
  };
  quad::Result total;
  auto add = [&](const quad::Result& r) {
    total.value += r.value;
    total.error += r.error;
    total.panels += r.panels;
  };
  // Left of the singular line: w in [-B, min(A, d)], v = d - w.
  {
    const double v0 = std::max(d - A, 0.0);
    const double v1 = d + B;
    if (v1 > v0) {
      auto cuts = lag_cuts(d, d - (A - B));
      add(quad::integrate_power_weighted([&](double v) { return overlap(d - v); }, v0, v1, alpha, opt, cuts));
    }
  }
  // Right of it: w in [max(-B, d), A], v = w - d.
  {
    const double v0 = std::max(-B - d, 0.0);
    const double v1 = A - d;
    if (v1 > v0) {
      auto cuts = lag_cuts(-d, (A - B) - d);
      add(quad::integrate_power_weighted([&](double v) { return overlap(d + v); }, v0, v1, alpha, opt, cuts));
    }
  }
  return total;
}

}  // namespace hlab
