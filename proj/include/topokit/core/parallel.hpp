#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace topokit {

inline int default_thread_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Static block partition of [0, n): `body(lo, hi)` runs once per worker
// block, so per-worker scratch space can live inside it.
template <class Body>
void parallel_for_blocks(std::int64_t n, int threads, Body&& body) {
  constexpr std::int64_t kMinBlock = 2048;
  if (threads <= 1 || n < 2 * kMinBlock) {
    if (n > 0) body(std::int64_t{0}, n);
    return;
  }
  const std::int64_t workers = std::min<std::int64_t>(threads, n / kMinBlock);
  const std::int64_t block = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) {
    const std::int64_t lo = w * block;
    const std::int64_t hi = std::min(n, lo + block);
    if (lo < hi) pool.emplace_back([lo, hi, &body] { body(lo, hi); });
  }
}

// `body(i)` must only write state owned by i.
template <class Body>
void parallel_for(std::int64_t n, int threads, Body&& body) {
  parallel_for_blocks(n, threads, [&body](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) body(i);
  });
}

}  // namespace topokit
