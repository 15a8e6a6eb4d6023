#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hlab {

/// out[i] = fn(i) for i < count, evaluated by `workers` threads pulling
/// indices from a shared counter. Results land at their index, so the output
/// does not depend on scheduling. The first exception is rethrown.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t count, std::size_t workers, Fn&& fn) {
  std::vector<R> out(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::min(workers, count);
  pool.reserve(n);
  for (std::size_t w = 0; w < n; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace hlab
