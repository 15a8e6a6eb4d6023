#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hlab {

struct PathMeta {
  int q = 0;
  double H = 0.0;
  std::string method;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// values[k] is the process at time k * delta.
struct ProcessPath {
  double delta = 0.0;
  std::vector<double> values;
  PathMeta meta;

  std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
  double horizon() const { return delta * static_cast<double>(steps()); }
  double time(std::size_t k) const { return delta * static_cast<double>(k); }
};

}  // namespace hlab
