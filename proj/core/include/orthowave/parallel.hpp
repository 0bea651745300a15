#pragma once

#include <cstddef>
#include <functional>

namespace orthowave {

/// Runs body(i, worker) for i in [0, n) on up to threads workers; worker < threads.
/// Iterations are handed out dynamically. threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, int)>& body);

}  // namespace orthowave
