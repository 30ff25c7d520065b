#pragma once

#include <cstddef>
#include <functional>

namespace mzi {

/// Runs fn(i) for every i in [0, n) on up to `threads` workers. Callers write
/// results into slot i, so output order never depends on scheduling. The
/// first exception thrown by fn is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

} // namespace mzi
