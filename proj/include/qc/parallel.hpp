#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace qc {

/// worker cap; 0 = hardware concurrency
void set_threads(unsigned n);
unsigned thread_count();

/// fn(i) for i in [0, n), static contiguous blocks; results must be written per index
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned t = std::min<std::size_t>(thread_count(), n);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + t - 1) / t;
  for (unsigned w = 0; w < t; ++w) {
    std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qc
