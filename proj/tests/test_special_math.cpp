#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hlab/kernel_spec.hpp"
#include "hlab/special_math.hpp"
#include "oracles.hpp"

using namespace hlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("derived exponents", "[special_math]") {
  const auto p = derive_params(2, 0.7);
  CHECK_THAT(p.H0, WithinRel(0.85, 1e-15));
  CHECK_THAT(p.Hprime, WithinRel(0.7, 1e-15));
  CHECK(p.nclt);
  CHECK_FALSE(derive_params(1, 0.7).nclt);
  CHECK(derive_params(1, 0.8).nclt);
  CHECK_THROWS_AS(derive_params(0, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(2, 1.0), std::invalid_argument);
}

TEST_CASE("H0 and Hprime satisfy Hprime = 2 H0 - 1", "[special_math][property]") {
  for (int q = 1; q <= 5; ++q)
    for (double H = 0.51; H < 1.0; H += 0.06) {
      const auto p = derive_params(q, H);
      CHECK_THAT(p.Hprime, WithinAbs(2.0 * p.H0 - 1.0, 1e-14));
      CHECK(p.H0 <= 1.0);
      CHECK(p.H0 >= 1.0 - 0.5 / q);
    }
}

TEST_CASE("beta and Hermite constants against mpmath", "[special_math]") {
  CHECK_THAT(beta_fn(0.35, 0.3), WithinRel(oracle::beta_035_030, 1e-13));
  CHECK_THAT(hermite_scale_c(derive_params(2, 0.7)), WithinRel(oracle::c_q2_h07, 1e-12));
  CHECK_THAT(hermite_scale_c(derive_params(1, 0.75)), WithinRel(oracle::c_q1_h075, 1e-12));
  CHECK_THAT(hermite_scale_c(derive_params(3, 0.9)), WithinRel(oracle::c_q3_h09, 1e-12));
}

TEST_CASE("limit constant b for exponential kernels", "[special_math]") {
  CHECK_THAT(limit_constant_b(derive_params(1, 0.8), exponential_kernel(1.0)), WithinRel(oracle::b_q1_h08_exp1, 1e-10));
  CHECK_THAT(limit_constant_b(derive_params(2, 0.7), exponential_kernel(1.0)), WithinRel(oracle::b_q2_h07_exp1, 1e-9));
  CHECK_THAT(limit_constant_b(derive_params(3, 0.9), exponential_kernel(2.0)), WithinRel(oracle::b_q3_h09_exp2, 1e-9));
  // Generic quadrature path, no closed forms.
  CHECK_THAT(limit_constant_b(derive_params(2, 0.7), without_closed_forms(exponential_kernel(1.0))),
             WithinRel(oracle::b_q2_h07_exp1, 1e-8));
}

TEST_CASE("b scales as theta^-(alpha+2) and c^2 in the amplitude", "[special_math][property]") {
  const auto p = derive_params(2, 0.8);
  const double alpha = limit_exponent(p);
  const double b1 = limit_constant_b(p, exponential_kernel(1.0));
  for (double theta : {0.25, 3.0}) {
    CHECK_THAT(limit_constant_b(p, exponential_kernel(theta)), WithinRel(b1 / std::pow(theta, alpha + 2.0), 1e-8));
  }
  CHECK_THAT(limit_constant_b(p, exponential_kernel(1.0, -2.0)), WithinRel(4.0 * b1, 1e-10));
}

TEST_CASE("q = 1 reduces to (int x)^2", "[special_math]") {
  const auto p = derive_params(1, 0.85);
  for (const auto& x : {box_kernel(2.5), power_kernel(1.7), exponential_kernel(0.5)}) {
    const double m = kernel_integral(x);
    CHECK(limit_constant_b(p, x) == limit_prefactor(p) * (m * m));
  }
}

TEST_CASE("inadmissible kernels are refused by b", "[special_math]") {
  CHECK_THROWS_AS(limit_constant_b(derive_params(1, 0.7), exponential_kernel(1.0)), std::domain_error);
  CHECK_THROWS_AS(limit_constant_b(derive_params(2, 0.7), power_kernel(0.8)), std::domain_error);
}

TEST_CASE("oscillatory integral closed form and numerics", "[special_math]") {
  const auto c = tempered_power_integral(0.75);
  CHECK_THAT(c.real(), WithinRel(oracle::tempered_075_re, 1e-13));
  CHECK_THAT(c.imag(), WithinRel(oracle::tempered_075_im, 1e-13));
  const auto e = tempered_power_integral_numeric(0.6);
  CHECK_THAT(e.extrapolated.real(), WithinRel(oracle::tempered_060_re, 1e-8));
  CHECK_THAT(e.extrapolated.imag(), WithinRel(oracle::tempered_060_im, 1e-8));
  // Tempering pulls the value towards zero modulus monotonically in eps.
  CHECK(std::abs(e.tempered[0]) < std::abs(e.tempered[1]));
  CHECK(std::abs(e.tempered[1]) < std::abs(e.tempered[2]));
}

TEST_CASE("beta convolution identity", "[special_math]") {
  CHECK_THAT(beta_convolution_identity(2.0, 0.0, 0.85), WithinRel(oracle::betaconv_2_0_085, 1e-13));
  CHECK_THAT(beta_convolution_numeric(2.0, 0.0, 0.85).value, WithinRel(oracle::betaconv_2_0_085, 1e-11));
  CHECK_THAT(beta_convolution_numeric(0.0, 2.0, 0.85).value, WithinRel(oracle::betaconv_2_0_085, 1e-11));
  CHECK_THROWS_AS(beta_convolution_identity(1.0, 1.0, 0.8), std::domain_error);
}

TEST_CASE("beta convolution depends only on |z1 - z2|", "[special_math][property]") {
  for (double shift : {0.0, 1.5, 10.0}) {
    CHECK_THAT(beta_convolution_numeric(0.3 + shift, 1.1 + shift, 0.7).value,
               WithinRel(beta_convolution_numeric(0.3, 1.1, 0.7).value, 1e-11));
  }
}

TEST_CASE("lagged double integral", "[special_math]") {
  const auto x = exponential_kernel(1.0);
  const auto xg = without_closed_forms(x);
  // Shift zero and full quadrant: Gamma(alpha + 1) / theta^(alpha + 2).
  CHECK_THAT(singular_double_integral(xg, -0.4, x.support, x.support).value, WithinRel(std::tgamma(0.6), 1e-9));
  // Symmetry under swapping the two arguments with the shift negated.
  const double a = lagged_double_integral(xg, -0.3, 2.0, 1.2, 0.8).value;
  const double b = lagged_double_integral(xg, -0.3, 1.2, 2.0, -0.8).value;
  CHECK_THAT(a, WithinRel(b, 1e-10));
  // Closed-form overlap and generic overlap agree.
  CHECK_THAT(lagged_double_integral(x, -0.3, 2.0, 1.2, 0.8).value, WithinRel(a, 1e-10));
}
