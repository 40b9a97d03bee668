#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace spinhall {

/// Worker count for grid evaluation; capped by the SPINHALL_THREADS
/// environment variable when set.
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("SPINHALL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < n) n = cap;
  }
  return n;
}

/// Run f(i) for i in [0, n). Work items must be independent.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace spinhall
