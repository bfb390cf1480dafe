#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

namespace pkem::detail {

// Runs fn(i) for i in [0, count), optionally across OpenMP threads. The first
// exception thrown by any iteration is rethrown after the loop.
template <class Fn>
void for_each_index(size_t count, bool parallel, Fn&& fn) {
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (int64_t i = 0; i < static_cast<int64_t>(count); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      fn(static_cast<size_t>(i));
    } catch (...) {
      std::lock_guard lock(mu);
      if (!err) err = std::current_exception();
      failed = true;
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace pkem::detail
