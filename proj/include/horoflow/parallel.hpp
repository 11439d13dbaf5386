#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace horoflow {

/// Data-parallel width from HOROFLOW_THREADS (0 or unset = runtime default).
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). If chunks
/// throw, the exception of the lowest-index chunk is rethrown, so failures
/// are reported identically whatever the thread count.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> values);

}  // namespace horoflow
