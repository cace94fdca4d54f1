#pragma once

#include <cstddef>
#include <functional>

namespace qdelta {

/// Worker threads to use: QDELTA_THREADS if set to a positive integer, else
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(0..n-1) on up to worker_count() threads. Each index is run
/// exactly once; callers write results into per-index slots so the outcome
/// does not depend on scheduling. The first exception (lowest index) is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qdelta
