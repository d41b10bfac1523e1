#pragma once

#include <cstddef>
#include <functional>

namespace mmrkit {

// Worker count: hardware concurrency, capped by the MMRKIT_THREADS
// environment variable when set (values < 1 mean 1).
std::size_t worker_count();

// Runs fn(i) for every i in [0, n), possibly on several threads. Chunk
// boundaries are fixed and independent of the worker count, and callers write
// only to slot i, so results are bit-reproducible for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mmrkit
