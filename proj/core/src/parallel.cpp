#include "alloylab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace alloylab {

std::vector<std::exception_ptr> parallel_for_index(std::size_t count, unsigned threads,
                                                   const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(count);
    if (count == 0) return errors;
    pin_blas_threads();

    const auto run_one = [&](std::size_t i) {
        try {
            task(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) run_one(i);
        return errors;
    }

    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) run_one(i);
            });
        }
    }
    return errors;
}

void parallel_for_index_or_throw(std::size_t count, unsigned threads,
                                 const std::function<void(std::size_t)>& task) {
    for (const auto& e : parallel_for_index(count, threads, task)) {
        if (e) std::rethrow_exception(e);
    }
}

void pin_blas_threads() noexcept {
    if (openblas_set_num_threads != nullptr) openblas_set_num_threads(1);
}

namespace {

double pairwise_range(const double* first, std::size_t n) noexcept {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += first[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_range(first, half) + pairwise_range(first + half, n - half);
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) noexcept {
    return pairwise_range(values.data(), values.size());
}

}  // namespace alloylab
