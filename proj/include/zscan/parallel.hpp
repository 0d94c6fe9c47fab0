// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstddef>
#include <functional>

namespace zscan {

// Worker count for parallel_for: hardware concurrency, overridden by the
// ZSCAN_THREADS environment variable when it holds a positive integer.
std::size_t worker_count();

// Runs fn(begin, end) over disjoint contiguous blocks covering [0, n).
// Callers preallocate per-index output slots; since block boundaries depend
// only on n and the worker count never changes results (each index is
// processed exactly once, independently), output is bitwise identical at
// any thread count. The first exception thrown by any block is rethrown.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace zscan
