#pragma once

#include <cstddef>
#include <functional>

namespace stickyflow {

// Worker cap: STICKYFLOW_THREADS if set and positive, else hardware concurrency.
std::size_t max_threads();

// Calls body(begin, end) on disjoint chunks covering [0, n). Chunk boundaries
// depend only on n and the worker count, and each index is visited once.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 256);

}  // namespace stickyflow
