#include "hlab/moving_average.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hlab {

Admissibility check_admissible(const KernelSpec& x, const HurstParams& p) {
  Admissibility out;
  if (!(p.H > 0.5 && p.H < 1.0)) {
    out.verdict = Admissibility::Verdict::rejected;
    out.clause = "H outside (1/2, 1)";
    return out;
  }
  if (p.q == 1 && !(p.H > 0.75)) {
    out.verdict = Admissibility::Verdict::rejected;
    out.clause = "CLT regime, out of scope";
    return out;
  }
  if (!x.integrable()) {
    out.verdict = Admissibility::Verdict::rejected;
    out.clause = "kernel not integrable on [0, inf)";
    return out;
  }
  KernelSpec mag = x;
  mag.eval = [f = x.eval](double u) { return std::abs(f(u)); };
  mag.integral = x.l1_norm;
  // Closed-form overlaps are quadratic in the amplitude, so they carry over
  // to |x| only for kernels of one sign; drop them otherwise.
  mag.overlap = nullptr;
  mag.quadrant_integral = nullptr;
  if (x.decay != DecayKind::power) mag.overlap = x.overlap;
  try {
    quad::Options opt;
    opt.rel_tol = 1e-8;
    opt.max_panels = 2000;
    out.norm_integral = singular_double_integral(mag, 2.0 * p.H - 2.0, x.support, x.support, opt).value;
  } catch (const quad::NonConvergence& e) {
    out.verdict = Admissibility::Verdict::undetermined;
    out.clause = std::string("norm integral did not converge: ") + e.what();
    return out;
  }
  if (!std::isfinite(out.norm_integral)) {
    out.verdict = Admissibility::Verdict::rejected;
    out.clause = "norm integral diverges";
    return out;
  }
  out.verdict = Admissibility::Verdict::accepted;
  return out;
}

ProcessPath build_ma_path(const KernelSpec& x, const ProcessPath& Z) {
  if (Z.values.size() < 2 || !(Z.delta > 0.0)) throw std::invalid_argument("build_ma_path: driver path is empty");
  const double d = Z.delta;
  const std::size_t n = Z.steps();
  // Taps with (j + 1/2) d beyond the support vanish.
  std::size_t taps = n;
  if (std::isfinite(x.support)) {
    const double reach = std::floor(x.support / d + 0.5);
    if (reach < static_cast<double>(n)) taps = static_cast<std::size_t>(reach);
  }
  std::vector<double> w(taps);
  for (std::size_t j = 0; j < taps; ++j) w[j] = x((static_cast<double>(j) + 0.5) * d);
  std::vector<double> dz(n);
  for (std::size_t i = 0; i < n; ++i) dz[i] = Z.values[i + 1] - Z.values[i];

  ProcessPath X;
  X.delta = d;
  X.meta = Z.meta;
  X.meta.method = Z.meta.method + "+ma";
  X.values.assign(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t span = std::min(k, taps);
    double acc = 0.0;
    for (std::size_t j = 0; j < span; ++j) acc += w[j] * dz[k - 1 - j];
    X.values[k] = acc;
  }
  return X;
}

ProcessPath ou_path(double lambda, double sigma, double xi, const ProcessPath& Z, OuScheme scheme) {
  if (!(lambda > 0.0) || !(sigma > 0.0)) throw std::invalid_argument("ou_path: lambda and sigma must be > 0");
  if (Z.values.size() < 2 || !(Z.delta > 0.0)) throw std::invalid_argument("ou_path: driver path is empty");
  const double d = Z.delta;
  const std::size_t n = Z.steps();
  const double decay = std::exp(-lambda * d);
  ProcessPath X;
  X.delta = d;
  X.meta = Z.meta;
  X.meta.method = Z.meta.method + "+ou";
  X.values.assign(n + 1, 0.0);
  X.values[0] = xi + sigma * Z.values[0];
  if (scheme == OuScheme::integration_by_parts) {
    // J_k approximates int_0^{t_k} e^(-lambda(t_k - u)) (Z(u) - Z(0)) du.
    double J = 0.0;
    const double z0 = Z.values[0];
    for (std::size_t k = 1; k <= n; ++k) {
      J = decay * J + 0.5 * d * (decay * (Z.values[k - 1] - z0) + (Z.values[k] - z0));
      const double t = d * static_cast<double>(k);
      X.values[k] = sigma * (Z.values[k] - z0) - lambda * sigma * J + xi * std::exp(-lambda * t);
    }
  } else {
    const double half = std::exp(-0.5 * lambda * d);
    double S = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      S = decay * S + half * (Z.values[k] - Z.values[k - 1]);
      const double t = d * static_cast<double>(k);
      X.values[k] = sigma * S + xi * std::exp(-lambda * t);
    }
  }
  X.values[0] = xi;
  return X;
}

std::size_t ou_burn_steps(double lambda, double delta) {
  if (!(lambda > 0.0) || !(delta > 0.0)) throw std::invalid_argument("ou_burn_steps: lambda and delta must be > 0");
  return static_cast<std::size_t>(std::ceil(8.0 / lambda / delta));
}

ProcessPath stationary_ou_path(double lambda, double sigma, const ProcessPath& Z, std::size_t burn_steps,
                               OuScheme scheme) {
  if (burn_steps >= Z.steps()) throw std::invalid_argument("stationary_ou_path: burn-in longer than the path");
  ProcessPath full = ou_path(lambda, sigma, 0.0, Z, scheme);
  ProcessPath out;
  out.delta = full.delta;
  out.meta = full.meta;
  out.meta.method += "+stationary";
  out.values.assign(full.values.begin() + static_cast<std::ptrdiff_t>(burn_steps), full.values.end());
  return out;
}

double ma_covariance(const KernelSpec& x, double H, double s, double u) {
  if (!(s >= 0.0 && u >= 0.0)) throw std::invalid_argument("ma_covariance: times must be >= 0");
  if (!(H > 0.5 && H < 1.0)) throw std::invalid_argument("ma_covariance: H must lie in (1/2, 1)");
  if (s == 0.0 || u == 0.0) return 0.0;
  if (u > s) std::swap(s, u);  // evaluate in one order so the result is exactly symmetric
  quad::Options opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-14;
  return H * (2.0 * H - 1.0) * lagged_double_integral(x, 2.0 * H - 2.0, s, u, s - u, opt).value;
}

}  // namespace hlab
