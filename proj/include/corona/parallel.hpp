#pragma once

#include <cstddef>
#include <functional>

namespace corona {

/// Worker count: CORONA_SPECTRA_THREADS if set and positive, otherwise the
/// hardware concurrency.
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n and the thread count, so results written by index are
/// identical for any schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace corona
