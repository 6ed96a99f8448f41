#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace selstab {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Splits [0, n) into fixed chunks, runs f(begin, end) per chunk on a worker
// pool, and returns per-chunk results in chunk order. Chunk boundaries depend
// only on (n, chunk_size), so merged output is identical for any thread count.
template <class R, class F>
std::vector<R> parallel_chunk_map(std::uint64_t n, unsigned threads, std::uint64_t chunk_size, F f) {
  if (chunk_size == 0) chunk_size = 1;
  std::uint64_t n_chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<R> results(static_cast<std::size_t>(n_chunks));
  if (n_chunks == 0) return results;
  threads = resolve_threads(threads);
  if (threads <= 1 || n_chunks == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      std::uint64_t b = c * chunk_size;
      std::uint64_t e = b + chunk_size < n ? b + chunk_size : n;
      results[static_cast<std::size_t>(c)] = f(b, e);
    }
    return results;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      std::uint64_t b = c * chunk_size;
      std::uint64_t e = b + chunk_size < n ? b + chunk_size : n;
      results[static_cast<std::size_t>(c)] = f(b, e);
    }
  };
  std::vector<std::thread> pool;
  unsigned spawn = threads < n_chunks ? threads : static_cast<unsigned>(n_chunks);
  pool.reserve(spawn);
  for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace selstab
