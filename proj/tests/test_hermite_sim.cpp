#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hlab/hermite_sim.hpp"
#include "hlab/statistics.hpp"

using namespace hlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Hermite polynomials", "[hermite_sim]") {
  for (double x : {-1.3, 0.0, 0.4, 2.5}) {
    CHECK(hermite_polynomial(0, x) == 1.0);
    CHECK(hermite_polynomial(1, x) == x);
    CHECK_THAT(hermite_polynomial(2, x), WithinAbs(x * x - 1.0, 1e-14));
    CHECK_THAT(hermite_polynomial(3, x), WithinAbs(x * x * x - 3.0 * x, 1e-13));
    CHECK_THAT(hermite_polynomial(4, x), WithinAbs(std::pow(x, 4) - 6.0 * x * x + 3.0, 1e-12));
  }
}

TEST_CASE("Hermite-sum variance by brute force", "[hermite_sim]") {
  auto rho = [](std::size_t k) { return 1.0 / (1.0 + static_cast<double>(k)); };
  for (int q : {1, 2, 3}) {
    const std::size_t N = 5;
    double brute = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) brute += std::tgamma(q + 1.0) * std::pow(rho(i > j ? i - j : j - i), q);
    CHECK_THAT(hermite_sum_variance(q, N, rho), WithinRel(brute, 1e-14));
  }
}

TEST_CASE("rank-q driver has Var Z(horizon) = horizon^(2H)", "[hermite_sim]") {
  for (int q : {1, 2}) {
    const auto p = derive_params(q, 0.75);
    const double horizon = 4.0;
    HermiteRankSimulator sim(p, 256, horizon);
    const std::size_t paths = 3000;
    std::vector<double> end(paths);
    for (std::size_t i = 0; i < paths; ++i) {
      Rng rng(stream_seed(11, q, i));
      end[i] = sim.sample(rng).values.back();
    }
    const auto v = stats::sample_cumulant(end, 2);
    CHECK(std::abs(v.value - std::pow(horizon, 1.5)) < 4.0 * v.se);
  }
}

TEST_CASE("matched driver is normalised the same way", "[hermite_sim]") {
  const auto p = derive_params(2, 0.8);
  HermiteRankOptions opt;
  opt.driver = DriverKind::matched;
  HermiteRankSimulator sim(p, 256, 1.0, opt);
  std::vector<double> end(3000);
  for (std::size_t i = 0; i < end.size(); ++i) {
    Rng rng(stream_seed(5, 0, i));
    end[i] = sim.sample(rng).values.back();
  }
  const auto v = stats::sample_cumulant(end, 2);
  CHECK(std::abs(v.value - 1.0) < 4.0 * v.se);
}

TEST_CASE("paths start at zero on the requested grid", "[hermite_sim]") {
  Rng rng(1);
  const auto path = simulate_hermite_path(derive_params(3, 0.9), 512, 2.0, rng);
  CHECK(path.values.size() == 513);
  CHECK(path.values.front() == 0.0);
  CHECK_THAT(path.delta, WithinRel(2.0 / 512, 1e-15));
  CHECK(path.meta.q == 3);
  CHECK_THROWS(simulate_hermite_path(derive_params(2, 0.7), 100, 1.0, rng));
}

TEST_CASE("direct Wiener-integral simulator", "[hermite_sim]") {
  for (int q : {1, 2}) {
    const auto p = derive_params(q, 0.8);
    DirectHermiteSimulator sim(p, 16, 1.0);
    CHECK(sim.tail_variance_bound() < 1e-4);
    std::vector<double> end(4000), mid(4000);
    for (std::size_t i = 0; i < end.size(); ++i) {
      Rng rng(stream_seed(3, q, i));
      const auto path = sim.sample(rng);
      end[i] = path.values.back();
      mid[i] = path.values[8];
    }
    const auto v1 = stats::sample_cumulant(end, 2);
    const auto vh = stats::sample_cumulant(mid, 2);
    // Discretisation bias is below a few percent at 16 steps.
    CHECK(std::abs(v1.value - 1.0) < 4.0 * v1.se + 0.03);
    CHECK(std::abs(vh.value - std::pow(0.5, 1.6)) < 4.0 * vh.se + 0.03);
    if (q == 2) CHECK(stats::sample_cumulant(end, 3).value > 0.0);
  }
}
