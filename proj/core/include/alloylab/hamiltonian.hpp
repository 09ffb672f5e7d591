#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "alloylab/grid.hpp"

namespace alloylab {

using Complex = std::complex<double>;
using ScalarFunction = std::function<double(const Point&)>;

/// Values given at grid points, in grid index order.
struct TabulatedField {
    std::vector<double> values;
};

using FieldSource = std::variant<ScalarFunction, TabulatedField>;

/// Closed-form or tabulated background fields A0 (one source per axis) and V0.
/// Missing components are zero.
struct FieldDescription {
    std::vector<FieldSource> vector_potential;
    FieldSource scalar_potential = ScalarFunction{};
};

/// Reads a tabulated field from CSV rows "i1[,i2[,i3]],value" (lattice indices,
/// 0-based). Lines starting with '#' and a non-numeric header row are skipped.
TabulatedField load_tabulated_csv(const std::string& path, const GridSpec& grid);

/// Background fields sampled on a grid.
///
/// link_potential[k][p] is A_k at the midpoint of the link p -> p + h e_k. It
/// is meaningful only where that forward neighbour exists; other slots are 0.
struct BackgroundField {
    std::vector<std::vector<double>> link_potential;
    std::vector<double> scalar_potential;
    double energy_shift = 0.0;
};

/// Grid maxima standing in for the sup-norms of b0 = -2i A0 and
/// c0 = V0 + |A0|^2 - i div A0. They are lower bounds of the continuum sups.
struct FieldNorms {
    double norm_b = 0.0;
    double norm_c = 0.0;
    double norm_V0 = 0.0;
    double norm_divA = 0.0;
};

struct MatrixEntry {
    std::size_t row;
    std::size_t col;
    Complex value;
};

/// Set of removed grid points (1 = removed). Empty means the full box.
using DomainMask = std::vector<std::uint8_t>;

/// Sparse Hermitian matrix stored as its upper triangle (row <= col).
///
/// The lower triangle is implied by conjugation, so Hermiticity is exact by
/// construction. Diagonal entries are stored with zero imaginary part.
class HermitianOperator {
public:
    HermitianOperator(std::size_t dimension, std::vector<MatrixEntry> upper_entries,
                      std::vector<std::size_t> grid_indices = {});

    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<MatrixEntry>& entries() const noexcept { return entries_; }
    /// Grid index of each matrix row (identity when no mask was applied).
    const std::vector<std::size_t>& grid_indices() const noexcept { return grid_indices_; }
    /// Largest |row - col| over stored entries.
    std::size_t bandwidth() const noexcept { return bandwidth_; }
    bool is_real() const noexcept { return real_; }

    std::vector<double> diagonal() const;
    Eigen::MatrixXcd to_dense() const;
    Eigen::SparseMatrix<Complex> to_sparse() const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

    HermitianOperator shifted(double c) const;
    /// Adds a real diagonal given per matrix row.
    HermitianOperator plus_diagonal(std::span<const double> values) const;
    /// Picks the rows of a full-grid field that survive the domain mask.
    std::vector<double> restrict_to_domain(std::span<const double> grid_values) const;

    double gershgorin_lower() const;
    double gershgorin_upper() const;
    /// max_ij |H_ij - conj(H_ji)| of the expanded matrix.
    double hermiticity_defect() const;

private:
    std::size_t dimension_;
    std::vector<MatrixEntry> entries_;
    std::vector<std::size_t> grid_indices_;
    std::size_t bandwidth_ = 0;
    bool real_ = true;
};

BackgroundField sample_background(const FieldDescription& description, const GridSpec& grid);

/// Peierls-phase finite-difference discretization of (-i grad + A0)^2 + V0.
///
/// Hopping p -> p + h e_k is -exp(-i h A_k) / h^2, the diagonal is
/// 2d/h^2 + V0 + energy_shift + extra_potential. Masked points are dropped,
/// i.e. Dirichlet conditions on the removed set.
HermitianOperator assemble_hamiltonian(const GridSpec& grid, const BackgroundField& background,
                                       std::span<const double> extra_potential = {},
                                       const DomainMask& domain_mask = {});

/// A_k -> A_k + (chi(x + h e_k) - chi(x)) / h on every interior link.
BackgroundField gauge_transform(const BackgroundField& background, const GridSpec& grid,
                                std::span<const double> gauge_function);

FieldNorms field_norms(const BackgroundField& background, const GridSpec& grid);

/// Returns a copy whose energy_shift makes the smallest eigenvalue of the
/// assembled operator on `grid` equal to zero.
BackgroundField normalize_ground_energy(const BackgroundField& background, const GridSpec& grid);

/// Zero fields sized for `grid`.
BackgroundField zero_background(const GridSpec& grid);

}  // namespace alloylab
