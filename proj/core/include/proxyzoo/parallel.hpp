#pragma once

#include <cstddef>
#include <functional>

namespace proxyzoo {

/// Number of worker threads for a requested job count; 0 means one per
/// hardware thread.
int resolve_jobs(int jobs);

/// Runs fn(0..count-1) on up to `jobs` threads. Tasks are claimed in index
/// order; the first exception thrown by any task is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace proxyzoo
