#pragma once

#include <functional>

namespace lfd {

/// Worker count from LFDEPTH_WORKERS, else the hardware concurrency (min 1).
int default_workers();

/// Runs fn(i) for i in [0, n) over contiguous index blocks. Each index is
/// processed exactly once, so results written to disjoint slots do not depend
/// on the worker count. `workers <= 0` means default_workers().
void parallel_for(int n, const std::function<void(int)>& fn, int workers = 0);

} // namespace lfd
