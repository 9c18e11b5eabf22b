#ifndef DYON_PARALLEL_HPP
#define DYON_PARALLEL_HPP

#include <functional>
#include <thread>
#include <vector>

namespace dyon {

/// Run fn(begin, end) over a partition of [0, n) on `threads` workers.
/// Every output element must depend only on pre-pass state, so the result is
/// bitwise independent of the partitioning.
inline void parallel_slabs(int n, int threads, const std::function<void(int, int)>& fn) {
  if (threads <= 1 || n < 2 * threads) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace dyon

#endif
