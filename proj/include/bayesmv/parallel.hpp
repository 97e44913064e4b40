#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bayesmv {

/// Runs body(i) for i in [0, n) over contiguous chunks on worker threads.
/// The body must only write to slots owned by index i.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned max_threads = 0) {
  unsigned threads = max_threads ? max_threads : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2 * threads) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::size_t begin = k * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bayesmv
