#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "alloylab/hamiltonian.hpp"

namespace alloylab {

/// Closed energy interval [lower, upper]; lower may be -infinity.
struct SpectralWindow {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    SpectralWindow() = default;
    SpectralWindow(double a, double b);

    static SpectralWindow up_to(double b) { return {-std::numeric_limits<double>::infinity(), b}; }
    double width() const noexcept { return upper - lower; }
    bool contains(double e) const noexcept { return lower <= e && e <= upper; }
};

enum class SolverMethod { dense, inertia, iterative };

struct SolverOptions {
    /// Operators above this dimension use shift-invert Lanczos for
    /// eigenpairs and banded LDL^H for inertia.
    std::size_t dense_crossover = 4096;
    bool want_vectors = false;
    /// Residual target relative to max(1, ||H||).
    double residual_tolerance = 1e-10;
};

struct SpectralReport {
    std::vector<double> eigenvalues;  // ascending
    Eigen::MatrixXcd eigenvectors;    // unit l2 columns, present when requested
    std::size_t count_in_window = 0;
    SpectralWindow window;
    SolverMethod method = SolverMethod::dense;
    double residual_bound = 0.0;
};

/// The `how_many` smallest eigenvalues (all when unset). `count_in_window`
/// counts listed eigenvalues inside `window`.
SpectralReport eigen_spectrum(const HermitianOperator& op, std::optional<std::size_t> how_many = std::nullopt,
                              const SolverOptions& options = {}, SpectralWindow window = {});

/// Eigenpairs with eigenvalue in `window` (vectors always computed).
SpectralReport eigenpairs_in_window(const HermitianOperator& op, SpectralWindow window,
                                    const SolverOptions& options = {});

struct Inertia {
    std::size_t negative = 0;
    std::size_t zero = 0;
    std::size_t positive = 0;
    double min_abs_pivot = 0.0;
};

/// Inertia of H - sigma I from a symmetric-indefinite triangular factorization.
Inertia shifted_inertia(const HermitianOperator& op, double sigma, const SolverOptions& options = {});

/// Tr chi_[a,b](H) as a difference of two inertia counts. Endpoints that hit
/// an eigenvalue (pivot within 1e-9 of zero) are pushed outward by
/// 1e-8 (1 + |endpoint|), at most three times.
std::size_t count_in_interval(const HermitianOperator& op, SpectralWindow window,
                              const SolverOptions& options = {});

/// Tr chi_(-inf, e](H).
std::size_t count_up_to(const HermitianOperator& op, double e, const SolverOptions& options = {});

double ground_energy(const HermitianOperator& op, const SolverOptions& options = {});

/// sum w |psi|^2 / sum |psi|^2 on the grid; the cell volume cancels.
double eigenfunction_mass(std::span<const Complex> eigenvector, std::span<const double> region_indicator);

/// Smallest eigenvalue of G_kl = sum_x conj(psi_k) U psi_l h^d, the sharp
/// constant in P U P >= kappa P on the span of the basis. Columns must be
/// orthonormal for the h^d-weighted inner product.
double compressed_operator_bottom(const Eigen::MatrixXcd& basis, std::span<const double> multiplier,
                                  double cell_volume);

}  // namespace alloylab
