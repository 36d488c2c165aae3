#pragma once

#include <cstddef>
#include <functional>

namespace skyfeel {

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Work is split into contiguous blocks; fn must only write to
/// per-index state so results are identical for every thread count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

/// Worker count actually used for a given request.
unsigned resolve_threads(unsigned requested);

}  // namespace skyfeel
