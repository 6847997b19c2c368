#pragma once

#include <functional>

namespace lamlab {

/// Worker count: LAMLAB_THREADS if set and positive, else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Iterations must write
/// to disjoint memory; the result never depends on the schedule.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace lamlab
