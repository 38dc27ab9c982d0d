#include "qcflow/core/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace qcflow {

namespace {
std::atomic<int> g_thread_count{0};

int hardware_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}
}  // namespace

void set_thread_count(int count) { g_thread_count.store(count < 0 ? 0 : count); }

int thread_count() {
  const int c = g_thread_count.load();
  return c > 0 ? c : hardware_threads();
}

int resolve_thread_count(int cli_value) {
  if (cli_value > 0) return cli_value;
  if (const char* env = std::getenv("QCFLOW_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return hardware_threads();
}

namespace detail {

void run_chunked(std::size_t begin, std::size_t end, std::size_t chunk,
                 const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (end <= begin) return;
  if (chunk == 0) chunk = 1;
  const std::size_t total = end - begin;
  const std::size_t nchunks = (total + chunk - 1) / chunk;
  const int workers =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(thread_count()), nchunks));

  auto work = [&](std::size_t c) {
    const std::size_t lo = begin + c * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    body(lo, hi, c);
  };

  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) work(c);
    return;
  }

  // the first worker exception (lowest chunk index) wins and is rethrown on
  // the calling thread after the pool drains
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_chunk = nchunks;

  auto drain = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      try {
        work(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (c < error_chunk) {
          error_chunk = c;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail
}  // namespace qcflow
