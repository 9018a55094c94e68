#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bmtree {

// Process-wide cap on worker threads; 0 means hardware concurrency.
void set_thread_cap(int threads);
int thread_cap();

// Runs fn(i) for i in [0, n). Splits into contiguous chunks, one per
// worker; falls back to the calling thread for small n or cap 1. Results
// must be written to pre-sized, index-addressed storage so the outcome is
// independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bmtree
