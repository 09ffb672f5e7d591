#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace alloylab {

/// Runs `task(i)` for i in [0, count) on up to `threads` workers.
///
/// Each index is executed exactly once; callers write results into slot i of
/// a preallocated container, so aggregation order never depends on
/// scheduling. Exceptions are captured per index and returned (null on
/// success).
std::vector<std::exception_ptr> parallel_for_index(std::size_t count, unsigned threads,
                                                   const std::function<void(std::size_t)>& task);

/// Same as parallel_for_index but rethrows the exception of the lowest failing index.
void parallel_for_index_or_throw(std::size_t count, unsigned threads,
                                 const std::function<void(std::size_t)>& task);

/// Keeps the BLAS backend single-threaded so dense kernels give identical
/// bits regardless of how many worker threads the caller uses.
void pin_blas_threads() noexcept;

/// Sum of values in index order using pairwise splitting.
double pairwise_sum(const std::vector<double>& values) noexcept;

}  // namespace alloylab
