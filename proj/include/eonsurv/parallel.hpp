#pragma once

#include <cstddef>
#include <functional>

namespace eonsurv {

// Calls task(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

// EONSURV_THREADS if set and positive, else hardware concurrency (at least 1).
int default_thread_count();

}  // namespace eonsurv
