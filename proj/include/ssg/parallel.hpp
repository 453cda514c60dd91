#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ssg {

// Worker count; 0 means one per hardware thread.
struct Parallelism {
  unsigned threads = 1;

  [[nodiscard]] unsigned resolved() const {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
};

// Calls body(i) for every i in [0, count). Work is split into contiguous
// blocks; results must be written to per-index slots so the outcome does not
// depend on the worker count. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t count, Parallelism par, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(par.resolved(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Maps body over [0, count) into a vector, index-aligned.
template <class T, class Body>
std::vector<T> parallel_map(std::size_t count, Parallelism par, Body&& body) {
  std::vector<T> out(count);
  parallel_for(count, par, [&](std::size_t i) { out[i] = body(i); });
  return out;
}

}  // namespace ssg
