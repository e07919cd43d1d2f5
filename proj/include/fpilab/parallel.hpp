#pragma once

#include <cstddef>
#include <functional>

namespace fpilab {

// Worker count used by every parallel loop in the library. Results never
// depend on it: loops write disjoint per-index slots and reductions are done
// afterwards in index order.
void set_thread_count(int threads);
int thread_count();

// Runs body(i) for i in [0, count), statically partitioned into contiguous
// blocks. Exceptions thrown by a worker are rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fpilab
