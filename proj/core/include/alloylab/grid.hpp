#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace alloylab {

/// A point of the box; components beyond the grid dimension are zero.
using Point = std::array<double, 3>;
using Coords = std::array<int, 3>;

/// Interior lattice of the open cube (-L/2, L/2)^d with n points per side.
///
/// Point i along an axis sits at -L/2 + (i + 1) h with h = L / (n + 1); the
/// Dirichlet boundary lives on the (excluded) points i = -1 and i = n. Matrix
/// indices are row-major with axis 0 running fastest.
class GridSpec {
public:
    GridSpec(int dim, double side_length, int points_per_side);

    int dim() const noexcept { return dim_; }
    double side_length() const noexcept { return side_length_; }
    int points_per_side() const noexcept { return n_; }
    double spacing() const noexcept { return spacing_; }
    std::size_t size() const noexcept { return size_; }

    /// h^d, the quadrature weight of one grid point.
    double cell_volume() const noexcept { return cell_volume_; }
    /// L^d
    double box_volume() const noexcept;

    std::size_t stride(int axis) const noexcept { return strides_[static_cast<std::size_t>(axis)]; }

    std::size_t index(const Coords& c) const noexcept;
    Coords coords(std::size_t index) const noexcept;
    Point position(std::size_t index) const noexcept;
    double coordinate(int lattice_index) const noexcept;

    /// True when the point has an interior neighbour at +h along `axis`.
    bool has_forward_neighbor(std::size_t index, int axis) const noexcept;

    bool operator==(const GridSpec& other) const noexcept = default;

private:
    int dim_;
    double side_length_;
    int n_;
    double spacing_;
    double cell_volume_;
    std::size_t size_;
    std::array<std::size_t, 3> strides_{};
};

GridSpec build_grid(int dim, double side_length, int points_per_side);

}  // namespace alloylab
