#pragma once
// Deterministic parallel helpers. Work is decomposed into fixed chunks that
// do not depend on the thread count, and partial results merge in a fixed
// pairwise order, so outputs are identical for 1 or many threads.

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace oe {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

// Run fn(i) for i in [0, count). fn must only write state owned by index i.
inline void parallel_for_index(std::size_t count, int threads,
                               const std::function<void(std::size_t)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min<std::size_t>(std::size_t(threads), count);
  pool.reserve(size_t(nw));
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Evaluate fn(begin, end) over fixed-size chunks of [0, total); returns the
// per-chunk partials in chunk order.
template <class Partial, class ChunkFn>
std::vector<Partial> map_chunks(std::size_t total, std::size_t chunk_size, int threads,
                                ChunkFn fn) {
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (total + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(n_chunks);
  parallel_for_index(n_chunks, threads, [&](std::size_t c) {
    const std::size_t b = c * chunk_size;
    const std::size_t e = std::min(total, b + chunk_size);
    partials[c] = fn(b, e);
  });
  return partials;
}

// Pairwise reduction with a fixed binary-tree shape.
template <class T, class Plus>
T pairwise_combine(std::vector<T> v, Plus plus) {
  if (v.empty()) return T{};
  while (v.size() > 1) {
    std::vector<T> next;
    next.reserve((v.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(plus(v[i], v[i + 1]));
    if (v.size() % 2 == 1) next.push_back(v.back());
    v = std::move(next);
  }
  return v.front();
}

}  // namespace oe
