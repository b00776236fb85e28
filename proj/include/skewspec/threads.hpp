#ifndef SKEWSPEC_THREADS_HPP
#define SKEWSPEC_THREADS_HPP

#include <cstdint>
#include <functional>

namespace skewspec {

// Worker count: hardware concurrency capped by the SKEWSPEC_THREADS
// environment variable (values < 1 mean 1).
int worker_count();

// Runs fn(i) for i in [0, n) on the worker pool in chunks. Callers get
// determinism by writing results to per-index slots and reducing serially
// afterwards. The first exception thrown by any fn is rethrown here.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn);

} // namespace skewspec

#endif
