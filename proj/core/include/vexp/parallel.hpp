#pragma once

#include <cstddef>
#include <functional>

namespace vexp {

/// Worker count used by the row-partitioned kernels. 1 (the default) runs
/// everything on the calling thread.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Calls `row(i)` for every i in [0, n), split across `thread_count()`
/// workers with interleaved rows. Callers write results into per-row slots
/// and reduce them in index order, so results do not depend on the worker
/// count.
void for_each_row(std::size_t n, const std::function<void(std::size_t)>& row);

}  // namespace vexp
