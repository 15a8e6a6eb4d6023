#include <cmath>
#include <sstream>

#include "hlab/kernel_spec.hpp"
#include "hlab/mc_engine.hpp"

namespace hlab {

namespace {

constexpr int kSchemaVersion = 1;

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::variance: return "variance";
    case Comparison::ks: return "ks";
    case Comparison::cumulants: return "cumulants";
  }
  return "?";
}

const char* to_string(DriverKind d) { return d == DriverKind::fgn ? "fgn" : "matched"; }
const char* to_string(LimitScale s) { return s == LimitScale::b ? "b" : "qb"; }

}  // namespace

std::vector<std::string> ExperimentConfig::problems() const {
  std::vector<std::string> out;
  if (q < 1) out.push_back("q must be >= 1");
  if (!(H > 0.5 && H < 1.0)) out.push_back("H must lie in (1/2, 1)");
  if (q == 1 && H > 0.5 && !(H > 0.75)) out.push_back("q = 1 with H <= 3/4: CLT regime, out of scope");
  try {
    (void)parse_kernel(kernel);
  } catch (const std::exception& e) {
    out.push_back(std::string("kernel: ") + e.what());
  }
  if (T_ladder.empty()) out.push_back("T_ladder must not be empty");
  for (std::size_t i = 0; i < T_ladder.size(); ++i) {
    if (!(T_ladder[i] > 0.0) || !std::isfinite(T_ladder[i])) out.push_back("T_ladder entries must be finite and > 0");
    if (i > 0 && !(T_ladder[i] > T_ladder[i - 1])) out.push_back("T_ladder must be strictly increasing");
  }
  if (!(t > 0.0) || !std::isfinite(t)) out.push_back("t must be finite and > 0");
  if (paths < 100) out.push_back("paths must be >= 100");
  if (grid < 1) out.push_back("grid must be >= 1");
  for (double T : T_ladder) {
    const double steps = static_cast<double>(grid) * T * t;
    if (steps < 256.0) {
      out.push_back("grid * T * t must be >= 256 (T = " + std::to_string(T) + ")");
      break;
    }
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
      out.push_back("T * t must be a multiple of 1/grid (T = " + std::to_string(T) + ")");
      break;
    }
  }
  if (workers < 1) out.push_back("workers must be >= 1");
  if (reference_cells < 16 || reference_cells > 4096) out.push_back("reference_cells must lie in [16, 4096]");
  if (refine < 16) out.push_back("refine must be >= 16");
  if (comparison != Comparison::variance && paths < 200) out.push_back("ks/cumulants comparisons need paths >= 200");
  return out;
}

void ExperimentConfig::validate() const {
  const auto p = problems();
  if (p.empty()) return;
  std::ostringstream os;
  for (const auto& s : p) os << s << '\n';
  throw ConfigError(os.str());
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["q"] = c.q;
  j["H"] = c.H;
  j["kernel"] = c.kernel;
  j["T_ladder"] = c.T_ladder;
  j["t"] = c.t;
  j["paths"] = c.paths;
  j["grid"] = c.grid;
  j["seed"] = c.seed;
  j["comparison"] = to_string(c.comparison);
  j["reference_cells"] = c.reference_cells;
  j["refine"] = c.refine;
  j["driver"] = to_string(c.driver);
  j["limit_scale"] = to_string(c.limit_scale);
  j["workers"] = c.workers;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object\n");
  std::vector<std::string> errs;
  ExperimentConfig c;
  static const char* known[] = {"schema", "q",    "H",    "kernel",          "T_ladder", "t",      "paths",
                                "grid",   "seed", "comparison", "reference_cells", "refine", "driver",
                                "limit_scale", "workers"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) errs.push_back("unknown key '" + it.key() + "'");
  }
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion)
    errs.push_back("schema must be " + std::to_string(kSchemaVersion));
  auto req = [&](const char* key) -> const nlohmann::json* {
    if (!j.contains(key)) {
      errs.push_back(std::string("missing key '") + key + "'");
      return nullptr;
    }
    return &j[key];
  };
  auto read = [&](const char* key, auto& dst, bool required) {
    const nlohmann::json* v = required ? req(key) : (j.contains(key) ? &j[key] : nullptr);
    if (!v) return;
    try {
      v->get_to(dst);
    } catch (const std::exception&) {
      errs.push_back(std::string("bad value for '") + key + "'");
    }
  };
  read("q", c.q, true);
  read("H", c.H, true);
  read("kernel", c.kernel, true);
  read("T_ladder", c.T_ladder, true);
  read("t", c.t, true);
  read("paths", c.paths, true);
  read("grid", c.grid, true);
  read("seed", c.seed, true);
  read("reference_cells", c.reference_cells, false);
  read("refine", c.refine, false);
  read("workers", c.workers, false);
  std::string s;
  if (j.contains("comparison")) {
    read("comparison", s, true);
    if (s == "variance") c.comparison = Comparison::variance;
    else if (s == "ks") c.comparison = Comparison::ks;
    else if (s == "cumulants") c.comparison = Comparison::cumulants;
    else errs.push_back("comparison must be variance, ks or cumulants");
  } else {
    errs.push_back("missing key 'comparison'");
  }
  if (j.contains("driver")) {
    s.clear();
    read("driver", s, false);
    if (s == "fgn") c.driver = DriverKind::fgn;
    else if (s == "matched") c.driver = DriverKind::matched;
    else errs.push_back("driver must be fgn or matched");
  }
  if (j.contains("limit_scale")) {
    s.clear();
    read("limit_scale", s, false);
    if (s == "b") c.limit_scale = LimitScale::b;
    else if (s == "qb") c.limit_scale = LimitScale::qb;
    else errs.push_back("limit_scale must be b or qb");
  }
  for (auto& p : c.problems()) errs.push_back(std::move(p));
  if (!errs.empty()) {
    std::ostringstream os;
    for (const auto& e : errs) os << e << '\n';
    throw ConfigError(os.str());
  }
  return c;
}

std::string config_hash(const ExperimentConfig& c) {
  nlohmann::json j = config_to_json(c);
  j.erase("workers");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hlab
