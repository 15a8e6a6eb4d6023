#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "hlab/rng.hpp"

namespace hlab {

struct FgnSpec {
  double hurst = 0.5;
  std::size_t n = 0;
  double delta = 1.0;
};

/// Autocovariance of unit-variance fractional Gaussian noise,
/// r(k) = (|k+1|^2h + |k-1|^2h - 2|k|^2h) / 2.
double fgn_autocovariance(long long k, double hurst);

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EmbeddingInfo {
  std::size_t size = 0;        // circulant length
  double min_eigenvalue = 0.0; // before clipping
  double clipped_mass = 0.0;   // sum of |negative eigenvalues|
  double total_mass = 0.0;     // sum of |eigenvalues|
  int doublings = 0;
};

/// Circulant-embedding sampler for one (hurst, n, delta). The embedding is
/// computed once; sample() may be called concurrently from several threads.
///
/// Eigenvalues below -1e-10 (relative to r(0)) trigger a retry at twice
/// the size. After `max_doublings` retries EmbeddingError is thrown.
class FgnGenerator {
 public:
  explicit FgnGenerator(const FgnSpec& spec, int max_doublings = 4);
  ~FgnGenerator();
  FgnGenerator(FgnGenerator&&) noexcept;
  FgnGenerator& operator=(FgnGenerator&&) noexcept;

  /// Generator over an arbitrary stationary autocovariance with acov(0) > 0,
  /// queried for lags 0 <= k <= size/2. Samples are multiplied by `scale`.
  static FgnGenerator from_autocovariance(const std::function<double(std::size_t)>& acov, std::size_t n,
                                          double scale, int max_doublings = 4);

  /// Writes n samples. Consumes exactly info().size normals from rng.
  void sample(Rng& rng, std::span<double> out) const;
  std::vector<double> sample(Rng& rng) const;

  std::size_t n() const { return n_; }
  const EmbeddingInfo& info() const { return info_; }

 private:
  FgnGenerator() = default;
  struct Plan;
  void build(const std::function<double(std::size_t)>& acov, int max_doublings);

  std::size_t n_ = 0;
  double scale_ = 1.0;
  EmbeddingInfo info_;
  std::vector<double> sqrt_eig_;  // sqrt(lambda_j / M) for j = 0..M/2
  std::unique_ptr<Plan> plan_;
};

std::vector<double> sample_fgn(const FgnSpec& spec, Rng& rng);

}  // namespace hlab
