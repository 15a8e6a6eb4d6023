#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hlab/hermite_sim.hpp"
#include "hlab/special_math.hpp"
#include "hlab/statistics.hpp"

namespace hlab {

enum class Comparison { variance, ks, cumulants };

/// Multiplier of the scaled Rosenblatt reference law: `b` uses b(H,q) as
/// given by the closed form, `qb` uses q * b(H,q) (the weight r!C(q,r)^2 of
/// the second-chaos term at r = q - 1).
enum class LimitScale { b, qb };

/// Thrown with every violated constraint listed, one per line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int q = 2;
  double H = 0.7;
  std::string kernel = "exp:theta=1";
  std::vector<double> T_ladder;
  double t = 1.0;
  std::size_t paths = 1000;
  /// Output grid points per unit of (unscaled) time; every rung needs
  /// grid * T * t >= 256.
  std::size_t grid = 16;
  std::uint64_t seed = 1;
  Comparison comparison = Comparison::variance;
  std::size_t workers = 1;
  /// Cells of the discretized Rosenblatt kernel used for the reference law.
  std::size_t reference_cells = 2048;
  std::size_t refine = 16;
  DriverKind driver = DriverKind::fgn;
  LimitScale limit_scale = LimitScale::b;

  /// Returns every violated constraint; empty when valid.
  std::vector<std::string> problems() const;
  void validate() const;
  HurstParams params() const { return derive_params(q, H); }
};

struct RungResult {
  double T = 0.0;
  std::size_t paths = 0;
  double delta = 0.0;
  stats::Estimate mean;
  stats::Estimate variance;
  std::optional<stats::Estimate> k3, k4;
  /// scale^2 * kappa_2 of the reference law at time t.
  double target = 0.0;
  /// Deterministic Var G_T(t) for q = 1.
  std::optional<double> gaussian_variance;
  std::optional<stats::KsResult> ks;
  std::optional<stats::Estimate> reference_k2, reference_k3;
  std::string error;
  std::vector<double> samples;
};

struct MCResult {
  ExperimentConfig config;
  double b = 0.0;
  double scale = 0.0;  // multiplier of the reference law
  double Hprime = 0.0;
  /// Cumulants of the discretized Rosenblatt kernel at time t (trace
  /// oracle), set when a reference law was built.
  std::optional<double> kernel_kappa2, kernel_kappa3;
  std::vector<RungResult> rungs;
  std::string config_hash;
  std::string code_version;
};

/// Deterministic given the config: path i of rung T draws from
/// stream_seed(seed, bits(T), i) and the reference law from its own stream.
MCResult run_experiment(const ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
/// FNV-1a of the canonical config JSON without the worker count.
std::string config_hash(const ExperimentConfig& cfg);

nlohmann::json to_json(const MCResult& r);
/// Per-rung table: T, mean, var, var_se, target, slope.
std::string rung_csv(const MCResult& r);
/// Long format: series, x, y, y_se.
std::string long_csv(const MCResult& r);

const char* code_version();

}  // namespace hlab
