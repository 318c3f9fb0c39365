#pragma once

#include <cstddef>
#include <functional>

namespace ringflow {

// Worker cap shared by every parallel loop in the library. 0 means "use the
// hardware concurrency".
void set_max_threads(unsigned count) noexcept;
unsigned max_threads() noexcept;

// Splits [0, count) into contiguous chunks, one per worker, and calls
// body(begin, end) for each. Chunks are disjoint so any body that writes only
// to its own indices produces identical results for every thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ringflow
