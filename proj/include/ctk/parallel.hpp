#pragma once

#include <functional>

namespace ctk {

/// Caps the worker pool used by parallel_for (0 = hardware concurrency).
void set_thread_cap(int threads);
int thread_cap();

/// Runs body(0..n-1) across the pool. Each index owns its output slot, so
/// results are identical for every thread count.
void parallel_for(int n, const std::function<void(int)>& body);

} // namespace ctk
