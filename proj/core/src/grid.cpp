#include "alloylab/grid.hpp"

#include <cmath>
#include <string>

#include "alloylab/error.hpp"

namespace alloylab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_dimension: return "invalid-dimension";
        case ErrorKind::non_positive_size: return "non-positive-size";
        case ErrorKind::non_finite_sample: return "non-finite-sample";
        case ErrorKind::empty_domain: return "empty-domain";
        case ErrorKind::solver_failure: return "solver-failure";
        case ErrorKind::endpoint_collision: return "endpoint-collision";
        case ErrorKind::factorization_breakdown: return "factorization-breakdown";
        case ErrorKind::invalid_delta: return "invalid-delta";
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::negative_t: return "negative-t";
        case ErrorKind::zero_vector: return "zero-vector";
        case ErrorKind::non_orthonormal_basis: return "non-orthonormal-basis";
        case ErrorKind::non_monotone_result: return "non-monotone-result";
        case ErrorKind::e1_above_threshold: return "e1-above-threshold";
        case ErrorKind::empty_feasible_set: return "empty-feasible-set";
        case ErrorKind::missing_parameter: return "missing-parameter";
        case ErrorKind::insufficient_points: return "insufficient-points";
        case ErrorKind::all_zero_estimates: return "all-zero-estimates";
        case ErrorKind::empty_window: return "empty-window";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::config_invalid: return "config-invalid";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

GridSpec::GridSpec(int dim, double side_length, int points_per_side)
    : dim_(dim), side_length_(side_length), n_(points_per_side) {
    if (dim < 1 || dim > 3) {
        throw Error(ErrorKind::invalid_dimension, "dimension must be 1, 2 or 3, got " + std::to_string(dim));
    }
    if (!(side_length > 0.0) || !std::isfinite(side_length)) {
        throw Error(ErrorKind::non_positive_size, "side length must be positive and finite");
    }
    if (points_per_side < 2) {
        throw Error(ErrorKind::non_positive_size, "need at least 2 points per side");
    }
    spacing_ = side_length / static_cast<double>(n_ + 1);
    cell_volume_ = std::pow(spacing_, dim_);
    std::size_t s = 1;
    for (int k = 0; k < 3; ++k) {
        strides_[static_cast<std::size_t>(k)] = s;
        if (k < dim_) s *= static_cast<std::size_t>(n_);
    }
    size_ = s;
}

double GridSpec::box_volume() const noexcept { return std::pow(side_length_, dim_); }

std::size_t GridSpec::index(const Coords& c) const noexcept {
    std::size_t idx = 0;
    for (int k = 0; k < dim_; ++k) {
        idx += static_cast<std::size_t>(c[static_cast<std::size_t>(k)]) * stride(k);
    }
    return idx;
}

Coords GridSpec::coords(std::size_t index) const noexcept {
    Coords c{0, 0, 0};
    const auto n = static_cast<std::size_t>(n_);
    for (int k = 0; k < dim_; ++k) {
        c[static_cast<std::size_t>(k)] = static_cast<int>(index % n);
        index /= n;
    }
    return c;
}

double GridSpec::coordinate(int lattice_index) const noexcept {
    return -0.5 * side_length_ + static_cast<double>(lattice_index + 1) * spacing_;
}

Point GridSpec::position(std::size_t index) const noexcept {
    const Coords c = coords(index);
    Point p{0.0, 0.0, 0.0};
    for (int k = 0; k < dim_; ++k) {
        p[static_cast<std::size_t>(k)] = coordinate(c[static_cast<std::size_t>(k)]);
    }
    return p;
}

bool GridSpec::has_forward_neighbor(std::size_t index, int axis) const noexcept {
    return (index / stride(axis)) % static_cast<std::size_t>(n_) + 1 < static_cast<std::size_t>(n_);
}

GridSpec build_grid(int dim, double side_length, int points_per_side) {
    return GridSpec(dim, side_length, points_per_side);
}

}  // namespace alloylab
