#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace coarsekit {

/// Splits [0, n) into at most `jobs` contiguous chunks and runs
/// fn(chunk_index, begin, end) on each. Callers keep per-chunk results and
/// merge them in chunk order, so output does not depend on the job count.
template <typename Fn>
void for_each_chunk(std::size_t n, unsigned jobs, std::size_t& chunks_out, Fn&& fn) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(jobs == 0 ? 1 : jobs, n));
  chunks_out = chunks;
  const std::size_t step = (n + chunks - 1) / chunks;
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = std::min(n, c * step);
    const std::size_t end = std::min(n, begin + step);
    pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace coarsekit
