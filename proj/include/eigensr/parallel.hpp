#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace eigensr {

/// Worker-pool size: EIGENSR_THREADS if set, else hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("EIGENSR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n). Work items must be independent; each
/// writes only its own output slot, so results do not depend on the
/// thread count.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace eigensr
