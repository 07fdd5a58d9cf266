#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace pmflow::detail {

// Worker count: PMFLOW_THREADS if set, else hardware concurrency, else 1.
inline unsigned thread_count() {
  if (const char* env = std::getenv("PMFLOW_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1u;
}

// Parallel loop over [begin, end). The index range is always split into the
// same 64 contiguous chunks regardless of worker count, so any floating-point
// reduction done per chunk is deterministic across thread settings.
template <class F>
void parallel_for(std::size_t begin, std::size_t end, F&& body) {
  if (end <= begin) return;
  const std::size_t total = end - begin;
  constexpr std::size_t kChunks = 64;
  const std::size_t chunk = (total + kChunks - 1) / kChunks;
  const unsigned workers = std::min<unsigned>(
      thread_count(), static_cast<unsigned>((total + chunk - 1) / chunk));

  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t next = 0;  // chunk index, claimed round-robin by worker id
  (void)next;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c * chunk < total; c += workers) {
        const std::size_t lo = begin + c * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace pmflow::detail
