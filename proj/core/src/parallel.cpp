#include "vexp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace vexp {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned threads) { g_threads.store(std::max(1u, threads)); }

unsigned thread_count() { return g_threads.load(); }

void for_each_row(std::size_t n, const std::function<void(std::size_t)>& row) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) row(i);
    return;
  }
  // Interleaved assignment balances triangular row loops.
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) row(i);
    });
  }
}

}  // namespace vexp
