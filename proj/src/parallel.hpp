#pragma once
#include <functional>

namespace sic {

// Run body(i) for i in [0, n) on up to `jobs` worker threads. Callers write
// results into per-index slots and reduce sequentially in index order, so the
// outcome is independent of the thread count by construction.
void parallel_for(long long n, int jobs, const std::function<void(long long)>& body);

} // namespace sic
