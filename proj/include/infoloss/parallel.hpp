#ifndef INFOLOSS_PARALLEL_HPP
#define INFOLOSS_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace infoloss {

/// Fixed chunk size for sampling and per-sample accumulation. Part of the
/// reproducibility contract: changing it changes every seeded batch.
inline constexpr std::size_t kChunkSize = 16384;

/// Worker count from INFOLOSS_WORKERS (default: hardware concurrency).
/// Only affects speed, never results.
inline unsigned worker_count() {
  if (const char* env = std::getenv("INFOLOSS_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(std::min(v, 256L));
    } catch (const std::exception&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs fn(chunk_index, begin, end) for every chunk of [0, total). Chunks are
/// statically assigned round-robin; fn must only write chunk-local state.
template <typename Fn>
void for_each_chunk(std::size_t total, Fn&& fn, unsigned workers = worker_count()) {
  const std::size_t chunks = (total + kChunkSize - 1) / kChunkSize;
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < chunks; c += stride) {
      const std::size_t begin = c * kChunkSize;
      fn(c, begin, std::min(total, begin + kChunkSize));
    }
  };
  const std::size_t w = std::min<std::size_t>(workers, chunks);
  if (w <= 1) {
    run(0, 1);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        run(t, w);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace infoloss

#endif  // INFOLOSS_PARALLEL_HPP
