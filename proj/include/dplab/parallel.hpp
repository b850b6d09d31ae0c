#pragma once

#include <cstddef>
#include <functional>

namespace dplab {

/// Worker count for grid sweeps: DPLAB_THREADS if set and positive, otherwise
/// the hardware concurrency (DPLAB_THREADS=0 also means auto).
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on up to worker_count() threads. Each index is
/// visited exactly once; the first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace dplab
