#include "chix/thread_pool.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace chix {

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHIX_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_blocks(std::uint64_t n_rep, std::uint64_t block_size, unsigned n_threads,
                     const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn) {
  if (n_rep == 0) return;
  if (block_size == 0) block_size = default_block_size();
  const std::uint64_t n_blocks = (n_rep + block_size - 1) / block_size;
  n_threads = resolve_thread_count(n_threads);
  if (n_threads <= 1 || n_blocks == 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b)
      fn(static_cast<std::size_t>(b), b * block_size, std::min(n_rep, (b + 1) * block_size));
    return;
  }

  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      fn(static_cast<std::size_t>(b), b * block_size, std::min(n_rep, (b + 1) * block_size));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = x[0];
    for (std::size_t i = 1; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace chix
