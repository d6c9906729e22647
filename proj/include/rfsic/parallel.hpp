#pragma once

#include <cstddef>
#include <functional>

namespace rfsic {

// Worker cap from RFSIC_THREADS if set to a positive integer, otherwise the
// hardware concurrency. Never affects results, only wall time.
std::size_t worker_count();

// Runs body(i) for i in [0, n). Each index is executed exactly once and must
// only write to state owned by that index. If any call throws, the exception
// from the lowest failing index is rethrown after all workers finish, so the
// reported failure does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rfsic
