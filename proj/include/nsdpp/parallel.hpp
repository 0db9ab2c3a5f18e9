#pragma once

#include <cstdint>
#include <functional>

namespace nsdpp {

/// Worker cap: NSDPP_THREADS if set (>= 1), otherwise hardware concurrency.
int max_threads();

/// Runs body(begin, end) over a partition of [0, count) across worker
/// threads. threads <= 0 means use max_threads(). Rethrows the first worker
/// exception on the calling thread.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& body,
                  int threads = 0);

}  // namespace nsdpp
