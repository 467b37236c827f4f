#pragma once

#include <cstddef>
#include <functional>

namespace fbstab {

/// Worker count: FBSTAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on each,
/// possibly concurrently. Chunk boundaries depend only on n and the thread
/// count, so reductions done per chunk and combined in chunk order are
/// deterministic. Exceptions from any chunk are rethrown in the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 64);

}  // namespace fbstab
