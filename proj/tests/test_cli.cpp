#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hlab/cli.hpp"

namespace fs = std::filesystem;
using hlab::cli::run;

namespace {

int call(std::initializer_list<const char*> args, std::string* out_text = nullptr) {
  std::vector<const char*> argv = {"hlab"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hlab_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2", "[cli]") {
  CHECK(call({}) == 2);
  CHECK(call({"frobnicate"}) == 2);
  CHECK(call({"sweep"}) == 2);
  CHECK(call({"sweep", "--config", "/nonexistent/file.json"}) == 2);
}

TEST_CASE("invalid configs exit with 2 and name the clause", "[cli]") {
  const auto dir = scratch("bad");
  std::ofstream(dir / "c.json") << R"({"schema":1,"q":1,"H":0.7,"kernel":"exp:theta=1","T_ladder":[16],)"
                                << R"("t":1,"paths":200,"grid":16,"seed":1,"comparison":"variance"})";
  std::string text;
  CHECK(call({"sweep", "--config", (dir / "c.json").c_str(), "--out", (dir / "o").c_str()}, &text) == 2);
  CHECK(text.find("CLT regime, out of scope") != std::string::npos);
}

TEST_CASE("simulate writes both paths and a manifest", "[cli]") {
  const auto dir = scratch("sim");
  std::ofstream(dir / "c.json") << R"({"schema":1,"q":2,"H":0.7,"kernel":"exp:theta=1","T_ladder":[16],)"
                                << R"("t":1,"paths":200,"grid":16,"seed":1,"comparison":"variance"})";
  const auto out = dir / "o";
  REQUIRE(call({"simulate", "--config", (dir / "c.json").c_str(), "--out", out.c_str()}) == 0);
  CHECK(fs::exists(out / "driver.csv"));
  CHECK(fs::exists(out / "moving_average.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  std::ifstream f(out / "driver.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "t,value");
}

TEST_CASE("sweep output is independent of --workers", "[cli]") {
  const auto dir = scratch("sweep");
  std::ofstream(dir / "c.json") << R"({"schema":1,"q":2,"H":0.7,"kernel":"exp:theta=1","T_ladder":[16,32],)"
                                << R"("t":1,"paths":200,"grid":16,"seed":9,"comparison":"variance"})";
  REQUIRE(call({"sweep", "--config", (dir / "c.json").c_str(), "--out", (dir / "a").c_str(), "--workers", "1"}) == 0);
  REQUIRE(call({"sweep", "--config", (dir / "c.json").c_str(), "--out", (dir / "b").c_str(), "--workers", "4"}) == 0);
  for (const char* name : {"rungs.csv", "sweep_long.csv"}) {
    std::ifstream a(dir / "a" / name), b(dir / "b" / name);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
}
