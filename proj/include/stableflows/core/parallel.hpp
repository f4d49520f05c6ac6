#pragma once

#include <cstddef>
#include <functional>

namespace stableflows {

/// Global worker cap (CLI --threads). 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(i) for i in [0, n). Work items are fixed blocks keyed by index,
/// so results are identical for any worker count; callers merge per-index
/// outputs in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace stableflows
