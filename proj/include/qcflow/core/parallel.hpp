#pragma once

// Thread-pool-free data parallelism over index ranges. Work is split into
// fixed-size chunks so reductions combine partial results in chunk order,
// which keeps outputs identical for any thread count.

#include <cstddef>
#include <functional>
#include <vector>

namespace qcflow {

// Global worker count. 0 means "use hardware concurrency".
void set_thread_count(int count);
int thread_count();

// Resolves --threads / QCFLOW_THREADS / hardware default, in that order.
int resolve_thread_count(int cli_value);

namespace detail {
void run_chunked(std::size_t begin, std::size_t end, std::size_t chunk,
                 const std::function<void(std::size_t, std::size_t, std::size_t)>& body);
}

// f(i) for i in [begin, end), split across workers.
template <class F>
void parallel_for(std::size_t begin, std::size_t end, F&& f,
                  std::size_t chunk = 1024) {
  detail::run_chunked(begin, end, chunk,
                      [&](std::size_t lo, std::size_t hi, std::size_t) {
                        for (std::size_t i = lo; i < hi; ++i) f(i);
                      });
}

// Deterministic reduction: per-chunk partials are combined sequentially in
// chunk order regardless of how chunks were scheduled.
template <class T, class ChunkFn, class CombineFn>
T parallel_reduce(std::size_t begin, std::size_t end, T init, ChunkFn&& per_chunk,
                  CombineFn&& combine, std::size_t chunk = 1024) {
  if (end <= begin) return init;
  const std::size_t nchunks = (end - begin + chunk - 1) / chunk;
  std::vector<T> partial(nchunks, init);
  detail::run_chunked(begin, end, chunk,
                      [&](std::size_t lo, std::size_t hi, std::size_t index) {
                        partial[index] = per_chunk(lo, hi);
                      });
  T acc = init;
  for (const T& p : partial) acc = combine(acc, p);
  return acc;
}

}  // namespace qcflow
