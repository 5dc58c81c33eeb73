#include "qc/parallel.hpp"

#include <atomic>

namespace qc {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_threads(unsigned n) { g_threads = n; }

unsigned thread_count() {
  unsigned n = g_threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

}  // namespace qc
