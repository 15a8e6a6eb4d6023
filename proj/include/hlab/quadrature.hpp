#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlab::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double rel_tol = 1e-11;
  double abs_tol = 1e-15;
  std::size_t max_panels = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Thrown when the panel budget runs out before the error target is met.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double value, double achieved)
      : std::runtime_error(what), value_(value), achieved_(achieved) {}
  double value() const noexcept { return value_; }
  double achieved_error() const noexcept { return achieved_; }

 private:
  double value_;
  double achieved_;
};

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
/// Panels with the largest error estimate are bisected first. Optional
/// breakpoints split the interval before adaptation starts.
Result integrate(const Integrand& f, double a, double b, const Options& opt = {},
                 std::span<const double> breakpoints = {});

/// Integral of v^alpha * g(v) over [v0, v1] with 0 <= v0 < v1 and alpha > -1.
/// Substitutes y = v^(1+alpha) so the weight disappears and g is sampled at
/// v = y^(1/(1+alpha)); this removes the endpoint singularity at v = 0.
/// Breakpoints are given in the original variable v.
Result integrate_power_weighted(const Integrand& g, double v0, double v1, double alpha,
                                const Options& opt = {}, std::span<const double> breakpoints = {});

/// Fixed Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Supported orders: 4, 8, 16, 32.
const GaussRule& gauss_legendre_unit(std::size_t order);

}  // namespace hlab::quad
