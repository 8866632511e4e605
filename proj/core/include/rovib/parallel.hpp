#pragma once

#include <cstddef>
#include <functional>

namespace rovib {

/// Worker count: hardware concurrency, capped by the ROVIB_THREADS environment variable.
unsigned worker_count();

/// Calls body(i) for i in [0, n), partitioned into contiguous blocks across
/// worker_count() threads. Each index is visited exactly once; results must
/// not depend on the partition.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rovib
