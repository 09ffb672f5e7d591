#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "alloylab/hamiltonian.hpp"

namespace alloylab::detail {

struct DenseEigenResult {
    std::vector<double> values;
    Eigen::MatrixXcd vectors;  // empty unless requested
};

/// Smallest `count` eigenpairs via LAPACK. Banded storage is used when the
/// bandwidth is small compared to the dimension; real operators use the real
/// symmetric drivers.
DenseEigenResult dense_eigensolve(const HermitianOperator& op, std::size_t count, bool want_vectors);

struct InertiaCounts {
    std::size_t negative = 0;
    std::size_t zero = 0;
    std::size_t positive = 0;
    double min_abs_pivot = 0.0;
};

/// Inertia of H - sigma I from a Bunch-Kaufman factorization (?sytrf/?hetrf).
InertiaCounts dense_inertia(const HermitianOperator& op, double sigma);

/// Inertia of H - sigma I from an unpivoted banded LDL^H factorization; a
/// tridiagonal operator makes this the classical Sturm count. Pivots with
/// |d| <= tiny are reported through min_abs_pivot and counted as zero.
InertiaCounts banded_inertia(const HermitianOperator& op, double sigma, double tiny);

}  // namespace alloylab::detail
