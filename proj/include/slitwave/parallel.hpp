#pragma once

#include <cstddef>
#include <functional>

namespace slitwave {

/// Worker count: SLITWAVE_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for i in [0, count) across worker_count() threads. Each
/// index is visited exactly once; callers write results into slot i, which
/// keeps output order independent of scheduling. The first exception thrown
/// by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace slitwave
