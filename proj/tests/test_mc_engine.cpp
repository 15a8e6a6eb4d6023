#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "hlab/mc_engine.hpp"
#include "json.hpp"

using namespace hlab;

namespace {

nlohmann::json small_config() {
  return nlohmann::json{{"schema", 1},   {"q", 2},         {"H", 0.7},   {"kernel", "exp:theta=1"},
                        {"T_ladder", {16, 32}}, {"t", 1.0}, {"paths", 200}, {"grid", 16},
                        {"seed", 3},     {"comparison", "variance"}};
}

}  // namespace

TEST_CASE("config round trip", "[mc_engine]") {
  const auto cfg = config_from_json(small_config());
  CHECK(cfg.q == 2);
  CHECK(cfg.T_ladder.size() == 2);
  const auto again = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
  CHECK(config_hash(again) == config_hash(cfg));
}

TEST_CASE("config errors are reported together", "[mc_engine]") {
  auto j = small_config();
  j["q"] = 1;
  j["H"] = 0.7;
  j["grid"] = 4;
  j["bogus"] = true;
  try {
    config_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("CLT regime, out of scope") != std::string::npos);
    CHECK(msg.find("grid") != std::string::npos);
  }
}

TEST_CASE("worker count does not enter the hash", "[mc_engine]") {
  auto j = small_config();
  const auto h1 = config_hash(config_from_json(j));
  j["workers"] = 8;
  CHECK(config_hash(config_from_json(j)) == h1);
  j["seed"] = 4;
  CHECK(config_hash(config_from_json(j)) != h1);
}

TEST_CASE("experiment output does not depend on the worker count", "[mc_engine]") {
  auto j = small_config();
  j["paths"] = 200;
  const auto a = run_experiment(config_from_json(j));
  j["workers"] = 3;
  const auto b = run_experiment(config_from_json(j));
  CHECK(rung_csv(a) == rung_csv(b));
  CHECK(long_csv(a) == long_csv(b));
  REQUIRE(a.rungs.size() == 2);
  CHECK(a.rungs[0].samples == b.rungs[0].samples);
  CHECK(rung_csv(a).rfind("T,mean,var,var_se,target,slope\n", 0) == 0);
  CHECK(long_csv(a).rfind("series,x,y,y_se\n", 0) == 0);
}

TEST_CASE("Gaussian case reports the deterministic variance", "[mc_engine]") {
  auto j = small_config();
  j["q"] = 1;
  j["H"] = 0.8;
  j["T_ladder"] = {16};
  const auto r = run_experiment(config_from_json(j));
  REQUIRE(r.rungs.size() == 1);
  REQUIRE(r.rungs[0].gaussian_variance);
  CHECK(*r.rungs[0].gaussian_variance > 0.0);
  const auto js = to_json(r);
  CHECK(js["provenance"]["code_version"] == code_version());
}
