#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hlab/quadrature.hpp"

using namespace hlab;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

TEST_CASE("adaptive rule integrates smooth functions", "[quadrature]") {
  auto r = quad::integrate([](double x) { return std::exp(x); }, 0.0, 2.0);
  CHECK_THAT(r.value, WithinRel(std::exp(2.0) - 1.0, 1e-13));
  auto s = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK_THAT(s.value, WithinRel(2.0, 1e-13));
}

TEST_CASE("reversed bounds flip the sign", "[quadrature]") {
  auto f = [](double x) { return x * x; };
  CHECK_THAT(quad::integrate(f, 1.0, 0.0).value, WithinRel(-1.0 / 3.0, 1e-14));
}

TEST_CASE("breakpoints handle a kink", "[quadrature]") {
  const double cut[] = {0.3};
  auto r = quad::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, cut);
  CHECK_THAT(r.value, WithinRel(0.5 * (0.09 + 0.49), 1e-14));
}

TEST_CASE("power weight removes the endpoint singularity", "[quadrature]") {
  for (double alpha : {-0.9, -0.5, -0.1, 0.0, 0.7}) {
    auto r = quad::integrate_power_weighted([](double v) { return std::exp(-v); }, 0.0, 50.0, alpha);
    CHECK_THAT(r.value, WithinRel(std::tgamma(alpha + 1.0), 1e-10));
  }
}

TEST_CASE("panel budget exhaustion throws", "[quadrature]") {
  quad::Options opt;
  opt.max_panels = 3;
  CHECK_THROWS_AS(quad::integrate([](double x) { return std::sin(1.0 / (x + 1e-4)); }, 0.0, 1.0, opt),
                  quad::NonConvergence);
}

TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1", "[quadrature]") {
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    const auto& g = quad::gauss_legendre_unit(n);
    REQUIRE(g.nodes.size() == n);
    const int deg = static_cast<int>(2 * n - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += g.weights[i] * std::pow(g.nodes[i], deg);
    CHECK_THAT(sum, WithinRel(1.0 / (deg + 1), 1e-13));
    for (std::size_t i = 1; i < n; ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  }
  CHECK_THROWS_AS(quad::gauss_legendre_unit(5), std::invalid_argument);
}
