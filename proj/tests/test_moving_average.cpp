#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hlab/hermite_sim.hpp"
#include "hlab/moving_average.hpp"
#include "oracles.hpp"

using namespace hlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("admissibility clauses", "[moving_average]") {
  const auto e = exponential_kernel(1.0);
  CHECK(check_admissible(e, derive_params(2, 0.7)).accepted());
  CHECK(check_admissible(e, derive_params(1, 0.8)).accepted());
  const auto clt = check_admissible(e, derive_params(1, 0.7));
  CHECK(clt.verdict == Admissibility::Verdict::rejected);
  CHECK(clt.clause == "CLT regime, out of scope");
  CHECK(check_admissible(e, derive_params(2, 0.45)).clause == "H outside (1/2, 1)");
  CHECK(check_admissible(power_kernel(0.9), derive_params(2, 0.7)).clause == "kernel not integrable on [0, inf)");
  CHECK(check_admissible(power_kernel(0.9, 20.0), derive_params(2, 0.7)).accepted());
}

TEST_CASE("covariance of the box-kernel process", "[moving_average]") {
  // x = 1 on [0, 1]: X_s = Z(s) - Z(max(s - 1, 0)) with fBm Z.
  const auto b = box_kernel(1.0);
  CHECK_THAT(ma_covariance(b, 0.8, 2.0, 1.5), WithinRel(oracle::box_cov_2_15_h08, 1e-8));
  CHECK_THAT(ma_covariance(b, 0.8, 0.7, 0.4), WithinRel(oracle::box_cov_07_04_h08, 1e-8));
  CHECK_THAT(ma_covariance(b, 0.8, 0.6, 0.6), WithinRel(std::pow(0.6, 1.6), 1e-8));
}

TEST_CASE("stationary variance of the exponential-kernel process", "[moving_average]") {
  CHECK_THAT(ma_covariance(exponential_kernel(1.0), 0.8, 40.0, 40.0), WithinRel(oracle::exp_var_inf_h08, 1e-8));
}

TEST_CASE("covariance is symmetric", "[moving_average][property]") {
  const auto x = exponential_kernel(0.8);
  for (double s : {0.3, 1.7, 5.0})
    for (double u : {0.2, 2.4}) CHECK(ma_covariance(x, 0.7, s, u) == ma_covariance(x, 0.7, u, s));
}

TEST_CASE("box-kernel moving average equals increments of the driver", "[moving_average]") {
  Rng rng(9);
  const auto Z = simulate_hermite_path(derive_params(2, 0.7), 512, 8.0, rng);
  const auto X = build_ma_path(box_kernel(1.0), Z);
  const std::size_t lag = 64;  // T0 / delta
  for (std::size_t k = 0; k <= 512; k += 17) {
    const double expect = Z.values[k] - Z.values[k >= lag ? k - lag : 0];
    CHECK_THAT(X.values[k], WithinAbs(expect, 1e-12));
  }
}

TEST_CASE("moving average is linear in the kernel", "[moving_average][property]") {
  Rng rng(2);
  const auto Z = simulate_hermite_path(derive_params(1, 0.8), 256, 4.0, rng);
  const auto a = build_ma_path(exponential_kernel(1.0), Z);
  const auto b = build_ma_path(exponential_kernel(1.0, -2.5), Z);
  for (std::size_t k = 0; k < a.values.size(); ++k) CHECK_THAT(b.values[k], WithinAbs(-2.5 * a.values[k], 1e-12));
}

TEST_CASE("the two OU schemes agree on a fine grid", "[moving_average]") {
  Rng rng(4);
  const auto Z = simulate_hermite_path(derive_params(1, 0.8), 4096, 4.0, rng);
  const auto a = ou_path(1.0, 1.0, 0.5, Z, OuScheme::integration_by_parts);
  const auto b = ou_path(1.0, 1.0, 0.5, Z, OuScheme::midpoint_stieltjes);
  CHECK(a.values[0] == 0.5);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
  CHECK(worst < 0.02);
}

TEST_CASE("stationary OU drops the burn-in", "[moving_average]") {
  Rng rng(5);
  const auto Z = simulate_hermite_path(derive_params(1, 0.8), 1024, 16.0, rng);
  const std::size_t burn = ou_burn_steps(1.0, Z.delta);
  CHECK(burn == 512);
  const auto X = stationary_ou_path(1.0, 1.0, Z, burn);
  CHECK(X.values.size() == 1025 - burn);
  CHECK_THROWS(stationary_ou_path(1.0, 1.0, Z, 2000));
}
