#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cavity {

/// Worker count from CAVITY_THREADS, else the hardware concurrency (>= 1).
/// Throws ConfigError when the variable is set but not a positive integer.
std::size_t thread_count();

namespace detail {
inline thread_local bool in_worker = false;
}

/// Runs fn(i) for i in [0, count) on a static block partition. Each index is
/// visited exactly once, so callers that write results by index obtain
/// output independent of the thread count. Nested calls from inside a worker
/// run serially. The first exception thrown by
/// any worker is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t threads = 0) {
  if (detail::in_worker) threads = 1;
  if (threads == 0) threads = thread_count();
  if (threads > count) threads = count;
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = count * t / threads;
    const std::size_t hi = count * (t + 1) / threads;
    pool.emplace_back([&, lo, hi, t] {
      detail::in_worker = true;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace cavity
