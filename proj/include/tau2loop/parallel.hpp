#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tau2 {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Callers make
/// results deterministic by writing into per-index slots.
inline void parallel_for(long count, long workers, const std::function<void(long)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  const long nthreads = std::min<long>(workers, count);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (long t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace tau2
