#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hlab/kernel_spec.hpp"

using namespace hlab;
using Catch::Matchers::WithinRel;

TEST_CASE("registry tags round-trip", "[kernel_spec]") {
  for (const char* tag : {"exp:theta=1", "exp:theta=0.5", "box:T0=2", "power:rho=1.5", "power:rho=0.8,cut=10"}) {
    const auto k = parse_kernel(tag);
    CHECK(parse_kernel(k.tag).tag == k.tag);
  }
  CHECK(parse_kernel("zero").l1_norm == 0.0);
}

TEST_CASE("malformed tags are rejected", "[kernel_spec]") {
  CHECK_THROWS_AS(parse_kernel("exp"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kernel("exp:rho=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kernel("gauss:s=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kernel("exp:theta=abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kernel("exp:theta=-1"), std::invalid_argument);
}

TEST_CASE("integrability classification", "[kernel_spec]") {
  CHECK(exponential_kernel(2.0).integrable());
  CHECK(power_kernel(1.2).integrable());
  CHECK_FALSE(power_kernel(0.9).integrable());
  CHECK(power_kernel(0.9, 50.0).integrable());
  CHECK(box_kernel(3.0).integrable());
}

TEST_CASE("kernel integrals", "[kernel_spec]") {
  CHECK_THAT(kernel_integral(exponential_kernel(0.5)), WithinRel(2.0, 1e-12));
  CHECK_THAT(kernel_integral(box_kernel(3.0)), WithinRel(3.0, 1e-15));
  CHECK_THAT(kernel_integral(power_kernel(2.0)), WithinRel(1.0, 1e-10));
  CHECK_THAT(kernel_integral(without_closed_forms(power_kernel(0.5, 8.0))), WithinRel(4.0, 1e-10));
}

TEST_CASE("kernel is zero outside its support", "[kernel_spec]") {
  const auto b = box_kernel(1.0);
  CHECK(b(-0.1) == 0.0);
  CHECK(b(0.5) == 1.0);
  CHECK(b(1.5) == 0.0);
  const auto e = exponential_kernel(1.0);
  CHECK(e(e.support * 1.01) == 0.0);
  CHECK(std::exp(-e.support) < 1e-13);
}

TEST_CASE("scaled kernels keep closed forms consistent", "[kernel_spec]") {
  const auto x = exponential_kernel(1.5);
  const auto y = scaled_kernel(x, -3.0);
  CHECK_THAT(y(0.4), WithinRel(-3.0 * x(0.4), 1e-15));
  CHECK_THAT(*y.integral, WithinRel(-3.0 * *x.integral, 1e-15));
  CHECK_THAT(y.l1_norm, WithinRel(3.0 * x.l1_norm, 1e-15));
  CHECK_THAT(*y.quadrant_integral(-0.4), WithinRel(9.0 * *x.quadrant_integral(-0.4), 1e-14));
}

TEST_CASE("closed-form overlap matches quadrature", "[kernel_spec]") {
  for (const auto& k : {exponential_kernel(0.7), box_kernel(2.0)}) {
    REQUIRE(k.overlap);
    for (double w : {-0.6, 0.0, 0.9}) {
      const double lo = std::max(0.0, w), hi = std::min(k.support, k.support + w);
      double ref = 0.0;
      const int n = 200000;
      const double h = (hi - lo) / n;
      for (int i = 0; i < n; ++i) {
        const double a = lo + (i + 0.5) * h;
        ref += k(a) * k(a - w) * h;
      }
      CHECK_THAT(k.overlap(w, lo, hi), WithinRel(ref, 1e-8));
    }
  }
}
