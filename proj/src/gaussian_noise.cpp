#include "hlab/gaussian_noise.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

namespace hlab {

namespace {

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

struct FgnGenerator::Plan {
  fftw_plan plan = nullptr;
  std::size_t size = 0;
  ~Plan() {
    if (plan) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

double fgn_autocovariance(long long k, double hurst) {
  if (k < 0) k = -k;
  if (k == 0) return 1.0;
  const double h2 = 2.0 * hurst;
  const double kd = static_cast<double>(k);
  if (k < 64) return 0.5 * (std::pow(kd + 1.0, h2) + std::pow(kd - 1.0, h2) - 2.0 * std::pow(kd, h2));
  // Second difference written in a cancellation-free form for large k.
  const double x = 1.0 / kd;
  const double up = std::expm1(h2 * std::log1p(x));
  const double down = std::expm1(h2 * std::log1p(-x));
  return 0.5 * std::pow(kd, h2) * (up + down);
}

FgnGenerator::FgnGenerator(const FgnSpec& spec, int max_doublings) {
  if (!(spec.hurst > 0.5 && spec.hurst < 1.0)) throw std::invalid_argument("FgnSpec: hurst must lie in (1/2, 1)");
  if (spec.n < 2) throw std::invalid_argument("FgnSpec: n must be >= 2");
  if (!(spec.delta > 0.0)) throw std::invalid_argument("FgnSpec: delta must be > 0");
  n_ = spec.n;
  scale_ = std::pow(spec.delta, spec.hurst);
  const double h = spec.hurst;
  build([h](std::size_t k) { return fgn_autocovariance(static_cast<long long>(k), h); }, max_doublings);
}

FgnGenerator FgnGenerator::from_autocovariance(const std::function<double(std::size_t)>& acov, std::size_t n,
                                               double scale, int max_doublings) {
  if (n < 2) throw std::invalid_argument("from_autocovariance: n must be >= 2");
  if (!(acov(0) > 0.0)) throw std::invalid_argument("from_autocovariance: acov(0) must be > 0");
  FgnGenerator g;
  g.n_ = n;
  g.scale_ = scale;
  g.build(acov, max_doublings);
  return g;
}

FgnGenerator::~FgnGenerator() = default;
FgnGenerator::FgnGenerator(FgnGenerator&&) noexcept = default;
FgnGenerator& FgnGenerator::operator=(FgnGenerator&&) noexcept = default;

void FgnGenerator::build(const std::function<double(std::size_t)>& acov, int max_doublings) {
  std::size_t m = 2;
  while (m < 2 * (n_ - 1)) m *= 2;
  const double r0 = acov(0);
  for (int attempt = 0; attempt <= max_doublings; ++attempt, m *= 2) {
    const std::size_t half = m / 2;
    std::unique_ptr<double, FftwDeleter> row(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
    std::unique_ptr<fftw_complex, FftwDeleter> spec(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (half + 1))));
    for (std::size_t k = 0; k <= half; ++k) row.get()[k] = acov(k);
    for (std::size_t k = half + 1; k < m; ++k) row.get()[k] = row.get()[m - k];
    {
      std::lock_guard lock(planner_mutex());
      fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), row.get(), spec.get(), FFTW_ESTIMATE);
      fftw_execute(fwd);
      fftw_destroy_plan(fwd);
    }
    EmbeddingInfo info;
    info.size = m;
    info.doublings = attempt;
    info.min_eigenvalue = spec.get()[0][0];
    std::vector<double> eig(half + 1);
    for (std::size_t j = 0; j <= half; ++j) {
      eig[j] = spec.get()[j][0];
      info.min_eigenvalue = std::min(info.min_eigenvalue, eig[j]);
      const double mult = (j == 0 || j == half) ? 1.0 : 2.0;
      info.total_mass += mult * std::abs(eig[j]);
      if (eig[j] < 0.0) info.clipped_mass += mult * -eig[j];
    }
    if (info.min_eigenvalue < -1e-10 * r0) continue;
    sqrt_eig_.resize(half + 1);
    const double md = static_cast<double>(m);
    for (std::size_t j = 0; j <= half; ++j) {
      const double lam = std::max(eig[j], 0.0);
      sqrt_eig_[j] = (j == 0 || j == half) ? std::sqrt(lam / md) : std::sqrt(lam / (2.0 * md));
    }
    info_ = info;
    plan_ = std::make_unique<Plan>();
    plan_->size = m;
    std::unique_ptr<fftw_complex, FftwDeleter> in(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (half + 1))));
    std::unique_ptr<double, FftwDeleter> out(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
    std::lock_guard lock(planner_mutex());
    plan_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE);
    return;
  }
  throw EmbeddingError("circulant embedding is not nonnegative definite up to size " + std::to_string(m / 2));
}

void FgnGenerator::sample(Rng& rng, std::span<double> out) const {
  if (out.size() != n_) throw std::invalid_argument("FgnGenerator::sample: output size mismatch");
  const std::size_t m = plan_->size;
  const std::size_t half = m / 2;
  std::unique_ptr<fftw_complex, FftwDeleter> in(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (half + 1))));
  std::unique_ptr<double, FftwDeleter> buf(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
  fftw_complex* w = in.get();
  w[0][0] = sqrt_eig_[0] * rng.normal();
  w[0][1] = 0.0;
  for (std::size_t j = 1; j < half; ++j) {
    w[j][0] = sqrt_eig_[j] * rng.normal();
    w[j][1] = sqrt_eig_[j] * rng.normal();
  }
  w[half][0] = sqrt_eig_[half] * rng.normal();
  w[half][1] = 0.0;
  fftw_execute_dft_c2r(plan_->plan, w, buf.get());
  for (std::size_t k = 0; k < n_; ++k) out[k] = scale_ * buf.get()[k];
}

std::vector<double> FgnGenerator::sample(Rng& rng) const {
  std::vector<double> out(n_);
  sample(rng, out);
  return out;
}

std::vector<double> sample_fgn(const FgnSpec& spec, Rng& rng) { return FgnGenerator(spec).sample(rng); }

}  // namespace hlab
