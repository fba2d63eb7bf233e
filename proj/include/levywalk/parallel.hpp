#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace levywalk {

// Worker count: LEVYWALK_THREADS when set (clamped to [1,256]), otherwise the
// hardware concurrency, never zero.
inline unsigned worker_count() {
  if (const char* env = std::getenv("LEVYWALK_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(std::min(v, 256L));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs body(i) for i in [0,count) over contiguous index blocks. Every index is
// processed exactly once, so any caller that writes only to slot i gets
// results independent of the worker count. body must not throw: exceptions
// must be stored in the slot, not propagated across threads.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = count * w / workers;
    std::size_t hi = count * (w + 1) / workers;
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace levywalk
