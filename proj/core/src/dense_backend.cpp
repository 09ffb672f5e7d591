#include "dense_backend.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "alloylab/error.hpp"

namespace alloylab::detail {

namespace {

bool prefer_banded(const HermitianOperator& op) {
    return 4 * (op.bandwidth() + 1) < op.dimension();
}

void check_info(lapack_int info, const char* routine) {
    if (info != 0) {
        throw Error(ErrorKind::solver_failure, std::string(routine) + " returned info=" + std::to_string(info));
    }
}

DenseEigenResult solve_real(const HermitianOperator& op, std::size_t count, bool want_vectors) {
    const auto n = static_cast<lapack_int>(op.dimension());
    const char jobz = want_vectors ? 'V' : 'N';
    const char range = count >= op.dimension() ? 'A' : 'I';
    const lapack_int il = 1;
    const lapack_int iu = static_cast<lapack_int>(std::min(count, op.dimension()));
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    lapack_int found = 0;
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<double> z(want_vectors ? static_cast<std::size_t>(n) * static_cast<std::size_t>(iu) : 1);
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
    const lapack_int ldz = want_vectors ? n : 1;

    if (prefer_banded(op)) {
        const auto kd = static_cast<lapack_int>(op.bandwidth());
        const lapack_int ldab = kd + 1;
        std::vector<double> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(n), 0.0);
        for (const auto& e : op.entries()) {
            const auto i = static_cast<lapack_int>(e.row);
            const auto j = static_cast<lapack_int>(e.col);
            ab[static_cast<std::size_t>(kd + i - j + j * ldab)] = e.value.real();
        }
        std::vector<double> q(want_vectors ? static_cast<std::size_t>(n) * static_cast<std::size_t>(n) : 1);
        check_info(LAPACKE_dsbevx(LAPACK_COL_MAJOR, jobz, range, 'U', n, kd, ab.data(), ldab, q.data(),
                                  want_vectors ? n : 1, 0.0, 0.0, il, iu, abstol, &found, w.data(), z.data(), ldz,
                                  ifail.data()),
                   "dsbevx");
    } else {
        std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        for (const auto& e : op.entries()) {
            a[e.row + e.col * static_cast<std::size_t>(n)] = e.value.real();
        }
        std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
        check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, jobz, range, 'U', n, a.data(), n, 0.0, 0.0, il, iu, abstol,
                                  &found, w.data(), z.data(), ldz, isuppz.data()),
                   "dsyevr");
    }

    DenseEigenResult out;
    out.values.assign(w.begin(), w.begin() + found);
    if (want_vectors) {
        out.vectors.resize(n, found);
        for (lapack_int c = 0; c < found; ++c) {
            for (lapack_int r = 0; r < n; ++r) {
                out.vectors(r, c) = z[static_cast<std::size_t>(r + c * n)];
            }
        }
    }
    return out;
}

DenseEigenResult solve_complex(const HermitianOperator& op, std::size_t count, bool want_vectors) {
    const auto n = static_cast<lapack_int>(op.dimension());
    const char jobz = want_vectors ? 'V' : 'N';
    const char range = count >= op.dimension() ? 'A' : 'I';
    const lapack_int il = 1;
    const lapack_int iu = static_cast<lapack_int>(std::min(count, op.dimension()));
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    lapack_int found = 0;
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<lapack_complex_double> z(want_vectors ? static_cast<std::size_t>(n) * static_cast<std::size_t>(iu)
                                                      : 1);
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
    const lapack_int ldz = want_vectors ? n : 1;

    if (prefer_banded(op)) {
        const auto kd = static_cast<lapack_int>(op.bandwidth());
        const lapack_int ldab = kd + 1;
        std::vector<lapack_complex_double> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(n), 0.0);
        for (const auto& e : op.entries()) {
            const auto i = static_cast<lapack_int>(e.row);
            const auto j = static_cast<lapack_int>(e.col);
            ab[static_cast<std::size_t>(kd + i - j + j * ldab)] = e.value;
        }
        std::vector<lapack_complex_double> q(want_vectors ? static_cast<std::size_t>(n) * static_cast<std::size_t>(n)
                                                          : 1);
        check_info(LAPACKE_zhbevx(LAPACK_COL_MAJOR, jobz, range, 'U', n, kd, ab.data(), ldab, q.data(),
                                  want_vectors ? n : 1, 0.0, 0.0, il, iu, abstol, &found, w.data(), z.data(), ldz,
                                  ifail.data()),
                   "zhbevx");
    } else {
        std::vector<lapack_complex_double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        for (const auto& e : op.entries()) {
            a[e.row + e.col * static_cast<std::size_t>(n)] = e.value;
        }
        std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
        check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, jobz, range, 'U', n, a.data(), n, 0.0, 0.0, il, iu, abstol,
                                  &found, w.data(), z.data(), ldz, isuppz.data()),
                   "zheevr");
    }

    DenseEigenResult out;
    out.values.assign(w.begin(), w.begin() + found);
    if (want_vectors) {
        out.vectors.resize(n, found);
        for (lapack_int c = 0; c < found; ++c) {
            for (lapack_int r = 0; r < n; ++r) {
                out.vectors(r, c) = z[static_cast<std::size_t>(r + c * n)];
            }
        }
    }
    return out;
}

void tally_block(InertiaCounts& counts, double a, double c, double b_abs2) {
    // Eigenvalues of the Hermitian 2x2 block [[a, b], [conj(b), c]].
    const double mean = 0.5 * (a + c);
    const double radius = std::sqrt(0.25 * (a - c) * (a - c) + b_abs2);
    for (const double ev : {mean - radius, mean + radius}) {
        counts.min_abs_pivot = std::min(counts.min_abs_pivot, std::abs(ev));
        if (ev < 0.0) ++counts.negative;
        else if (ev > 0.0) ++counts.positive;
        else ++counts.zero;
    }
}

void tally_pivot(InertiaCounts& counts, double d) {
    counts.min_abs_pivot = std::min(counts.min_abs_pivot, std::abs(d));
    if (d < 0.0) ++counts.negative;
    else if (d > 0.0) ++counts.positive;
    else ++counts.zero;
}

}  // namespace

DenseEigenResult dense_eigensolve(const HermitianOperator& op, std::size_t count, bool want_vectors) {
    if (count == 0) return {};
    return op.is_real() ? solve_real(op, count, want_vectors) : solve_complex(op, count, want_vectors);
}

InertiaCounts dense_inertia(const HermitianOperator& op, double sigma) {
    const auto n = static_cast<lapack_int>(op.dimension());
    const auto un = static_cast<std::size_t>(n);
    std::vector<lapack_int> ipiv(un);
    InertiaCounts counts;
    counts.min_abs_pivot = std::numeric_limits<double>::infinity();

    if (op.is_real()) {
        std::vector<double> a(un * un, 0.0);
        for (const auto& e : op.entries()) a[e.row + e.col * un] = e.value.real();
        for (std::size_t i = 0; i < un; ++i) a[i + i * un] -= sigma;
        const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'U', n, a.data(), n, ipiv.data());
        if (info < 0) check_info(info, "dsytrf");
        for (std::size_t k = 0; k < un; ++k) {
            if (ipiv[k] > 0) {
                tally_pivot(counts, a[k + k * un]);
            } else {
                const double b = a[k + (k + 1) * un];
                tally_block(counts, a[k + k * un], a[(k + 1) + (k + 1) * un], b * b);
                ++k;
            }
        }
    } else {
        std::vector<lapack_complex_double> a(un * un, 0.0);
        for (const auto& e : op.entries()) a[e.row + e.col * un] = e.value;
        for (std::size_t i = 0; i < un; ++i) a[i + i * un] -= sigma;
        const lapack_int info = LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'U', n, a.data(), n, ipiv.data());
        if (info < 0) check_info(info, "zhetrf");
        for (std::size_t k = 0; k < un; ++k) {
            if (ipiv[k] > 0) {
                tally_pivot(counts, a[k + k * un].real());
            } else {
                const lapack_complex_double b = a[k + (k + 1) * un];
                tally_block(counts, a[k + k * un].real(), a[(k + 1) + (k + 1) * un].real(), std::norm(b));
                ++k;
            }
        }
    }
    return counts;
}

InertiaCounts banded_inertia(const HermitianOperator& op, double sigma, double tiny) {
    const std::size_t n = op.dimension();
    const std::size_t kd = op.bandwidth();
    // lower[j][i - j] holds A(i, j) for j <= i <= j + kd.
    std::vector<std::vector<Complex>> lower(n, std::vector<Complex>(kd + 1, Complex(0.0, 0.0)));
    for (const auto& e : op.entries()) {
        lower[e.row][e.col - e.row] += std::conj(e.value);
    }
    for (std::size_t j = 0; j < n; ++j) lower[j][0] -= sigma;

    InertiaCounts counts;
    counts.min_abs_pivot = std::numeric_limits<double>::infinity();
    std::vector<Complex> l(kd + 1);
    for (std::size_t j = 0; j < n; ++j) {
        double d = lower[j][0].real();
        if (std::abs(d) <= tiny) {
            // Perturb the pivot so the elimination can proceed; the caller
            // sees the collision through min_abs_pivot.
            counts.min_abs_pivot = std::min(counts.min_abs_pivot, std::abs(d));
            d = d < 0.0 ? -tiny : tiny;
            if (tiny == 0.0) d = std::numeric_limits<double>::min();
            ++counts.zero;
        } else {
            tally_pivot(counts, d);
        }
        const std::size_t reach = std::min(kd, n - 1 - j);
        for (std::size_t r = 1; r <= reach; ++r) l[r] = lower[j][r] / d;
        for (std::size_t c = 1; c <= reach; ++c) {
            if (l[c] == Complex(0.0, 0.0)) continue;
            auto& col = lower[j + c];
            const Complex scale = d * std::conj(l[c]);
            for (std::size_t r = c; r <= reach; ++r) col[r - c] -= l[r] * scale;
        }
    }
    return counts;
}

}  // namespace alloylab::detail
