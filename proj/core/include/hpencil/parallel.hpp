#pragma once

#include <cstddef>
#include <functional>

namespace hpencil {

/// Worker count actually used: min(requested or hardware concurrency,
/// HERGLOTZ_THREADS when set). Always at least 1.
unsigned effective_threads(unsigned requested = 0);

/// Run fn(i) for i in [0, count) across effective_threads(max_threads)
/// workers. Results must be written to caller-owned slots keyed by i so the
/// aggregate is deterministic. The first exception is rethrown after join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned max_threads = 0);

}  // namespace hpencil
