#pragma once

#include <cstddef>
#include <functional>

namespace nanotrap::util {

/// Global worker-thread budget for grid fills and sweeps (default 4).
void set_thread_count(int n);
int thread_count();

/// Run fn(i) for i in [0, n). Work is chunked over the thread budget;
/// results must not depend on execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace nanotrap::util
