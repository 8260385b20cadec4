#include "ftl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ftl {

namespace {
std::atomic<unsigned> g_override{0};

unsigned env_threads() {
  const char* v = std::getenv("FTL_THREADS");
  if (v == nullptr) return 0;
  try {
    const long n = std::stol(v);
    return n > 0 ? static_cast<unsigned>(n) : 0;
  } catch (...) {
    return 0;
  }
}
}  // namespace

unsigned thread_count() {
  if (unsigned o = g_override.load(); o > 0) return o;
  if (unsigned e = env_threads(); e > 0) return e;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(unsigned n) { g_override.store(n); }

std::size_t parallel_chunks(std::size_t n,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                            std::size_t min_chunk) {
  if (n == 0) return 0;
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(thread_count(), (n + min_chunk - 1) / std::max<std::size_t>(1, min_chunk)));
  if (workers == 1) {
    body(0, n, 0);
    return 1;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t step = (n + workers - 1) / workers;
  std::size_t chunks = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * step;
    if (b >= n) break;
    const std::size_t e = std::min(n, b + step);
    ++chunks;
    pool.emplace_back([&, b, e, w] {
      try {
        body(b, e, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return chunks;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t min_chunk) {
  parallel_chunks(
      n,
      [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) body(i);
      },
      min_chunk);
}

}  // namespace ftl
