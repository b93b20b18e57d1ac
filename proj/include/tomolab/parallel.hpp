#pragma once

#include <cstddef>
#include <functional>

namespace tomolab {

/// Worker cap used by parallel_for. Zero means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Calls fn(i) for every i in [0, n). Each index must write only to its own
/// output slot; results are then independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tomolab
