#pragma once

#include <cstddef>
#include <functional>

namespace ftl {

/// Worker count: FTL_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Override the worker count for the current process (0 restores the default).
void set_thread_count(unsigned n);

/// Runs body(begin, end, chunk_index) over [0, n) split into at most thread_count() chunks.
/// Returns the number of chunks used.
std::size_t parallel_chunks(std::size_t n,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                            std::size_t min_chunk = 1024);

/// Element-wise convenience wrapper over parallel_chunks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_chunk = 1024);

}  // namespace ftl
