#pragma once
#include <cstddef>
#include <functional>

namespace tobit {

// Worker count from TOBIT_THREADS, falling back to the hardware count.
int default_thread_count();

// Runs fn(0) .. fn(count-1) on up to `threads` workers. Callers get
// determinism by writing to index-addressed slots and reducing in order
// after the call returns. Exceptions are rethrown on the calling thread.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace tobit
