#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hyperpower::detail {

// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is owned by
// exactly one chunk, so per-index results do not depend on the thread count.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  const std::size_t step = (n + threads - 1) / threads;
  for (std::size_t t = 1; t < threads; ++t) {
    const std::size_t b = std::min(n, t * step);
    const std::size_t e = std::min(n, b + step);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, step));
}

}  // namespace hyperpower::detail
