#pragma once

#include <cstddef>
#include <functional>

namespace evqe {

/// Runs fn(i) for every i in [0, n) using up to `workers` threads.
/// Work items must be independent; results should be written to per-index
/// slots so that the outcome does not depend on scheduling. The first
/// exception thrown by any item is rethrown after all threads join.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace evqe
