#pragma once

#include <cstdint>
#include <random>
#include <span>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace hlab {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of an independent stream: (base seed, stream tag, index) mixed
/// through two splitmix rounds. Path i of an experiment draws from
/// stream_seed(seed, rung, i) only.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  void fill_normal(std::span<double> out) {
    for (double& v : out) v = normal_(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
  boost::random::uniform_01<double> uniform_;
};

}  // namespace hlab
