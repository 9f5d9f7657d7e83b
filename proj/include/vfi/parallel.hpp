#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace vfi {

// Worker count: explicit argument wins, then VFI_THREADS, then hardware.
inline int default_threads() {
  if (const char* env = std::getenv("VFI_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

// Deterministic parallel loop: the index space is split into contiguous
// chunks, each index writes only its own output slot, so the result is
// independent of the thread count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                         int threads = 0) {
  if (threads <= 0) threads = default_threads();
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::size_t nt = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    std::size_t lo = count * t / nt;
    std::size_t hi = count * (t + 1) / nt;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace vfi
