#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hlab/chaos.hpp"
#include "hlab/statistics.hpp"
#include "oracles.hpp"

using namespace hlab;
using namespace hlab::chaos;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ChaosKernel random_kernel(int order, std::size_t size, Rng& rng) {
  ChaosKernel f(order, size);
  for (double& v : f.data()) v = rng.normal() / std::sqrt(static_cast<double>(f.entries()));
  return f;
}

}  // namespace

TEST_CASE("symmetrisation is a projection", "[chaos][property]") {
  Rng rng(1);
  for (int order : {2, 3, 4}) {
    const auto f = random_kernel(order, 5, rng);
    const auto s = symmetrize(f);
    const auto ss = symmetrize(s);
    for (std::size_t i = 0; i < s.entries(); ++i) CHECK_THAT(ss[i], WithinAbs(s[i], 1e-15));
    CHECK(s.norm() <= f.norm() + 1e-14);
  }
}

TEST_CASE("contraction norms", "[chaos][property]") {
  Rng rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 1 + trial % 3, q = 1 + (trial / 3) % 3;
    const auto f = random_kernel(p, 6, rng);
    const auto g = random_kernel(q, 6, rng);
    for (int r = std::max(0, (p + q - 3) / 2); r <= std::min(p, q); ++r) {
      const auto c = contract(f, g, r);
      CHECK(c.order() == p + q - 2 * r);
      CHECK(c.norm() <= f.norm() * g.norm() * (1.0 + 1e-12));
    }
    if (p == q) CHECK_THAT(contract(f, g, p)[0], WithinAbs(
        [&] { double s = 0; for (std::size_t i = 0; i < f.entries(); ++i) s += f[i] * g[i]; return s; }(), 1e-13));
  }
  const auto f = random_kernel(2, 4, rng);
  CHECK_THAT(tensor(f, f).norm(), WithinRel(f.squared_norm(), 1e-13));
}

TEST_CASE("second-order Wiener integral is a centred quadratic form", "[chaos]") {
  Rng rng(3);
  const auto f = symmetrize(random_kernel(2, 7, rng));
  std::vector<double> z(7);
  rng.fill_normal(z);
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), 7);
  const double expect = zv.dot(f.matrix() * zv) - f.matrix().trace();
  CHECK_THAT(wiener_integral(f, z), WithinAbs(expect, 1e-12));
}

TEST_CASE("Wiener integrals of repeated indices use Hermite polynomials", "[chaos]") {
  ChaosKernel f(3, 2);
  const std::size_t idx[] = {1, 1, 1};
  f.at(idx) = 1.0;
  const std::vector<double> z = {0.3, 1.7};
  CHECK_THAT(wiener_integral(f, z), WithinAbs(std::pow(1.7, 3) - 3.0 * 1.7, 1e-13));
}

TEST_CASE("product formula of two first-order integrals", "[chaos]") {
  Rng rng(4);
  const auto f = random_kernel(1, 64, rng);
  const auto g = random_kernel(1, 64, rng);
  const auto rep = product_formula_check(f, g, 500, rng);
  CHECK(rep.max_residual <= 1e-10);
  CHECK(std::abs(rep.mean_product - rep.inner_product) < 4.0 * rep.mean_product_se);
  CHECK(std::abs(rep.mean_i2) < 4.0 * rep.mean_i2_se);
}

TEST_CASE("Rosenblatt constants", "[chaos]") {
  const auto s = rosenblatt_spec(0.7);
  CHECK_THAT(s.A1, WithinRel(oracle::rosenblatt_a1_07, 1e-13));
  CHECK_THAT(s.A2, WithinRel(oracle::rosenblatt_a2_07, 1e-13));
  for (double h : {0.55, 0.7, 0.85, 0.95}) {
    CHECK_THAT(rosenblatt_a1_from_d(h), WithinRel(rosenblatt_spec(h).A1, 1e-13));
    CHECK_THAT(rosenblatt_a2_from_d(h), WithinRel(rosenblatt_spec(h).A2, 1e-13));
  }
  CHECK_THROWS(rosenblatt_spec(0.4));
}

TEST_CASE("trace-oracle cumulants from eigenvalues", "[chaos]") {
  const std::vector<double> eig = {0.5, -0.25, 0.125};
  double s2 = 0, s3 = 0;
  for (double l : eig) s2 += l * l, s3 += l * l * l;
  CHECK_THAT(chaos2_cumulant_from_eigenvalues(eig, 2), WithinRel(2.0 * s2, 1e-15));
  CHECK_THAT(chaos2_cumulant_from_eigenvalues(eig, 3), WithinRel(8.0 * s3, 1e-15));
  Rng rng(5);
  const auto f = random_kernel(2, 9, rng);
  CHECK_THAT(chaos2_cumulant(f, 3), WithinRel(chaos2_cumulant_from_eigenvalues(kernel_eigenvalues(f), 3), 1e-10));
  CHECK_THAT(chaos2_cumulant(f, 2), WithinRel(2.0 * symmetrize(f).squared_norm(), 1e-12));
}

TEST_CASE("discretised Rosenblatt kernel has unit variance at t = 1", "[chaos]") {
  const auto spec = rosenblatt_spec(0.7);
  RosenblattGrid grid;
  const auto K = rosenblatt_kernel(spec, 1.0, 1024, &grid);
  CHECK(grid.tail_bound < 1e-4);
  const auto eig = kernel_eigenvalues(K);
  const double k2 = chaos2_cumulant_from_eigenvalues(eig, 2);
  const double k3 = chaos2_cumulant_from_eigenvalues(eig, 3);
  // Cell averaging loses a little variance; the loss shrinks with n.
  CHECK(k2 < 1.0);
  CHECK(k2 > 0.97);
  CHECK_THAT(k3, WithinRel(oracle::rosenblatt_k3_07, 0.01));
}

TEST_CASE("cell-averaged Gram operator converges at rate h^(2Hr-1)", "[chaos]") {
  const auto spec = rosenblatt_spec(0.7);
  const double a = chaos2_cumulant(rosenblatt_gram_kernel(spec, 1.0, 256), 2);
  const double b = chaos2_cumulant(rosenblatt_gram_kernel(spec, 1.0, 512), 2);
  const double r = std::pow(0.5, 2.0 * 0.7 - 1.0);
  CHECK_THAT((b - r * a) / (1.0 - r), WithinRel(1.0, 2e-3));
  const double k3 = chaos2_cumulant_from_eigenvalues(kernel_eigenvalues(rosenblatt_gram_kernel(spec, 1.0, 512)), 3);
  CHECK_THAT(k3, WithinRel(oracle::rosenblatt_k3_07, 2e-3));
}

TEST_CASE("self-similarity of the discretised kernel", "[chaos][property]") {
  const auto spec = rosenblatt_spec(0.7);
  const double k1 = chaos2_cumulant(rosenblatt_kernel(spec, 1.0, 256), 2);
  const double k2 = chaos2_cumulant(rosenblatt_kernel(spec, 2.0, 256), 2);
  CHECK_THAT(k2 / k1, WithinRel(std::pow(2.0, 1.4), 1e-9));
}

TEST_CASE("chaos-2 samples reproduce the trace-oracle cumulants", "[chaos]") {
  Rng rng(6);
  const auto f = random_kernel(2, 12, rng);
  const auto eig = kernel_eigenvalues(f);
  const auto xs = chaos2_sample(f, 40000, rng);
  for (int m : {2, 3}) {
    const auto k = stats::sample_cumulant(xs, m);
    CHECK(std::abs(k.value - chaos2_cumulant_from_eigenvalues(eig, m)) < 4.0 * k.se);
  }
  CHECK(std::abs(stats::mean(xs)) < 4.0 * std::sqrt(chaos2_cumulant_from_eigenvalues(eig, 2) / 40000.0));
}
