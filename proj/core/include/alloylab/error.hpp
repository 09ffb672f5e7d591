#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alloylab {

enum class ErrorKind {
    invalid_dimension,
    non_positive_size,
    non_finite_sample,
    empty_domain,
    solver_failure,
    endpoint_collision,
    factorization_breakdown,
    invalid_delta,
    invalid_argument,
    negative_t,
    zero_vector,
    non_orthonormal_basis,
    non_monotone_result,
    e1_above_threshold,
    empty_feasible_set,
    missing_parameter,
    insufficient_points,
    all_zero_estimates,
    empty_window,
    precondition,
    config_invalid,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace alloylab
