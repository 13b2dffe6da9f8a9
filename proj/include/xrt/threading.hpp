#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace xrt {

// Global worker count for parallel loops (default: hardware concurrency).
void set_thread_count(int n);
int thread_count();

// Runs fn(chunk_index) for chunk_index in [0, n_chunks). Chunks are a fixed
// decomposition of the work, independent of the thread count, and each chunk
// must write only to its own outputs; results are then bit-reproducible for
// any number of threads.
void parallel_chunks(int n_chunks, const std::function<void(int)>& fn);

}  // namespace xrt
