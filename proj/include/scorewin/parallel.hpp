#pragma once

#include <cstdint>
#include <functional>

namespace scorewin {

// Runs fn(i) for every i in [0, n) on up to `threads` workers. Callers own
// one output slot per index, so results never depend on the thread count or
// on scheduling. The first exception thrown by any fn is rethrown after all
// workers finish.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace scorewin
