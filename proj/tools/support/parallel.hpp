#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nhkubo::tools {

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluates f(i) for i in [0, n) on a pool of workers; results come back in
/// index order. The first exception thrown by any task is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f, unsigned workers = default_workers()) {
  std::vector<R> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace nhkubo::tools
