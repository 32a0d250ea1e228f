#pragma once

#include <functional>

namespace sandtone {

/// Worker count used by the per-pixel passes. 0 means hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Blocks until all
/// chunks finish; the first exception thrown by a chunk is rethrown.
/// Results must not depend on how [0, n) is chunked.
void parallel_for(int n, const std::function<void(int begin, int end)>& body);

}  // namespace sandtone
