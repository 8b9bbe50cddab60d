#pragma once

#include <cstddef>
#include <functional>

namespace specsense {

/// Worker threads to use: hardware concurrency, capped by SPECSENSE_THREADS
/// when that variable holds a positive integer.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads (0 = worker_count()).
/// Each index runs exactly once; callers write results by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace specsense
