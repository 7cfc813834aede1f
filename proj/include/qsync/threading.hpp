#pragma once

#include <cstddef>
#include <functional>

namespace qsync {

// Worker count for parallel regions: QSYNC_THREADS if set, else the
// hardware concurrency. Always at least 1.
int worker_count();

// Runs fn(begin, end) over disjoint blocks of [0, n). threads == 0 picks
// worker_count(); threads == 1 runs inline with no thread spawned.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace qsync
