#include "alloylab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>

#include "alloylab/error.hpp"
#include "dense_backend.hpp"

namespace alloylab {

SpectralWindow::SpectralWindow(double a, double b) : lower(a), upper(b) {
    if (std::isnan(a) || std::isnan(b) || a > b) {
        throw Error(ErrorKind::invalid_argument, "spectral window needs lower <= upper");
    }
}

namespace {

double operator_scale(const HermitianOperator& op) {
    return std::max({1.0, std::abs(op.gershgorin_lower()), std::abs(op.gershgorin_upper())});
}

double max_residual(const HermitianOperator& op, const std::vector<double>& values, const Eigen::MatrixXcd& vectors) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        const Eigen::VectorXcd v = vectors.col(k);
        worst = std::max(worst, (op.apply(v) - values[static_cast<std::size_t>(k)] * v).norm());
    }
    return worst;
}

/// Shift-invert Lanczos with full reorthogonalization for the `count` smallest
/// eigenpairs. The shift sits below the Gershgorin bound so H - sigma is
/// positive definite and a sparse Cholesky applies its inverse.
SpectralReport lanczos_smallest(const HermitianOperator& op, std::size_t count, const SolverOptions& options) {
    const auto n = static_cast<Eigen::Index>(op.dimension());
    const double sigma = op.gershgorin_lower() - 1.0;
    Eigen::SparseMatrix<Complex> a = op.to_sparse();
    Eigen::SparseMatrix<Complex> id(n, n);
    id.setIdentity();
    a = a - Complex(sigma, 0.0) * id;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<Complex>> chol(a);
    if (chol.info() != Eigen::Success) throw Error(ErrorKind::solver_failure, "sparse Cholesky of H - sigma failed");

    const double tol = options.residual_tolerance * operator_scale(op);
    auto m = static_cast<Eigen::Index>(std::min<std::size_t>(op.dimension(), std::max<std::size_t>(2 * count + 20, 40)));
    double achieved = std::numeric_limits<double>::infinity();

    for (;;) {
        Eigen::MatrixXcd basis(n, m);
        std::vector<double> alpha;
        std::vector<double> beta;
        Eigen::VectorXcd q(n);
        for (Eigen::Index i = 0; i < n; ++i) q(i) = Complex(1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i)), 0.0);
        q.normalize();
        Eigen::Index built = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            basis.col(j) = q;
            built = j + 1;
            Eigen::VectorXcd w = chol.solve(q);
            const double aj = q.dot(w).real();
            alpha.push_back(aj);
            for (int pass = 0; pass < 2; ++pass) {
                w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
            }
            const double bj = w.norm();
            if (j + 1 == m || bj < 1e-14 * std::abs(aj)) break;
            beta.push_back(bj);
            q = w / bj;
        }

        const auto k = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
        const auto want = static_cast<Eigen::Index>(std::min<std::size_t>(count, static_cast<std::size_t>(k)));
        SpectralReport report;
        report.method = SolverMethod::iterative;
        report.eigenvectors.resize(n, want);
        for (Eigen::Index r = 0; r < want; ++r) {
            // Largest Ritz values of (H - sigma)^{-1} are the smallest of H.
            const Eigen::Index col = k - 1 - r;
            const double theta = small.eigenvalues()(col);
            Eigen::VectorXcd y = basis.leftCols(built) * small.eigenvectors().col(col).cast<Complex>();
            y.normalize();
            const Eigen::VectorXcd hy = op.apply(y);
            const double mu = y.dot(hy).real();
            (void)theta;
            report.eigenvalues.push_back(mu);
            report.eigenvectors.col(r) = y;
        }
        std::vector<std::size_t> order(report.eigenvalues.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return report.eigenvalues[x] < report.eigenvalues[y]; });
        SpectralReport sorted = report;
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted.eigenvalues[i] = report.eigenvalues[order[i]];
            sorted.eigenvectors.col(static_cast<Eigen::Index>(i)) =
                report.eigenvectors.col(static_cast<Eigen::Index>(order[i]));
        }
        sorted.residual_bound = max_residual(op, sorted.eigenvalues, sorted.eigenvectors);
        achieved = sorted.residual_bound;
        if (achieved <= tol && static_cast<std::size_t>(want) == count) return sorted;
        if (m == n) break;
        m = std::min(n, 2 * m);
    }
    throw Error(ErrorKind::solver_failure,
                "Lanczos did not converge, achieved residual " + std::to_string(achieved));
}

}  // namespace

SpectralReport eigen_spectrum(const HermitianOperator& op, std::optional<std::size_t> how_many,
                              const SolverOptions& options, SpectralWindow window) {
    const std::size_t count = std::min(how_many.value_or(op.dimension()), op.dimension());
    SpectralReport report;
    if (op.dimension() <= options.dense_crossover || count == op.dimension()) {
        auto dense = detail::dense_eigensolve(op, count, options.want_vectors);
        report.eigenvalues = std::move(dense.values);
        report.eigenvectors = std::move(dense.vectors);
        report.method = SolverMethod::dense;
        if (options.want_vectors) {
            report.residual_bound = max_residual(op, report.eigenvalues, report.eigenvectors);
        } else {
            // Backward-stable dense reduction: a-priori residual bound.
            report.residual_bound = static_cast<double>(op.dimension()) *
                                    std::numeric_limits<double>::epsilon() * operator_scale(op);
        }
    } else {
        report = lanczos_smallest(op, count, options);
        if (!options.want_vectors) report.eigenvectors.resize(0, 0);
    }
    report.window = window;
    report.count_in_window = static_cast<std::size_t>(
        std::count_if(report.eigenvalues.begin(), report.eigenvalues.end(),
                      [&](double e) { return window.contains(e); }));
    return report;
}

SpectralReport eigenpairs_in_window(const HermitianOperator& op, SpectralWindow window,
                                    const SolverOptions& options) {
    SolverOptions opts = options;
    opts.want_vectors = true;
    const std::size_t below_upper = count_up_to(op, window.upper, options);
    SpectralReport all = eigen_spectrum(op, below_upper, opts, window);
    SpectralReport out;
    out.window = window;
    out.method = all.method;
    out.residual_bound = all.residual_bound;
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < all.eigenvalues.size(); ++i) {
        if (window.contains(all.eigenvalues[i])) keep.push_back(static_cast<Eigen::Index>(i));
    }
    out.eigenvectors.resize(static_cast<Eigen::Index>(op.dimension()), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        out.eigenvalues.push_back(all.eigenvalues[static_cast<std::size_t>(keep[c])]);
        out.eigenvectors.col(static_cast<Eigen::Index>(c)) = all.eigenvectors.col(keep[c]);
    }
    out.count_in_window = keep.size();
    return out;
}

Inertia shifted_inertia(const HermitianOperator& op, double sigma, const SolverOptions& options) {
    const double tiny = 1e-9 * (1.0 + std::abs(sigma));
    detail::InertiaCounts c;
    if (op.bandwidth() <= 1 || op.dimension() > options.dense_crossover) {
        c = detail::banded_inertia(op, sigma, tiny);
    } else {
        c = detail::dense_inertia(op, sigma);
    }
    return {c.negative, c.zero, c.positive, c.min_abs_pivot};
}

namespace {

constexpr int kMaxDilations = 3;

/// Number of eigenvalues strictly below sigma; `outward` is the dilation
/// direction used when sigma collides with an eigenvalue.
std::size_t count_below(const HermitianOperator& op, double sigma, double outward, const SolverOptions& options) {
    for (int attempt = 0; attempt <= kMaxDilations; ++attempt) {
        const Inertia in = shifted_inertia(op, sigma, options);
        const double tiny = 1e-9 * (1.0 + std::abs(sigma));
        if (in.zero == 0 && in.min_abs_pivot > tiny) return in.negative;
        sigma += outward * 1e-8 * (1.0 + std::abs(sigma));
    }
    throw Error(ErrorKind::endpoint_collision,
                "window endpoint still collides with an eigenvalue after " + std::to_string(kMaxDilations) +
                    " dilations");
}

}  // namespace

std::size_t count_in_interval(const HermitianOperator& op, SpectralWindow window, const SolverOptions& options) {
    if (window.upper == std::numeric_limits<double>::infinity()) {
        const std::size_t below = std::isfinite(window.lower) ? count_below(op, window.lower, -1.0, options) : 0;
        return op.dimension() - below;
    }
    const std::size_t upper = count_below(op, window.upper, +1.0, options);
    const std::size_t lower = std::isfinite(window.lower) ? count_below(op, window.lower, -1.0, options) : 0;
    if (lower > upper) throw Error(ErrorKind::factorization_breakdown, "inertia counts are not monotone");
    return upper - lower;
}

std::size_t count_up_to(const HermitianOperator& op, double e, const SolverOptions& options) {
    return count_in_interval(op, SpectralWindow::up_to(e), options);
}

double ground_energy(const HermitianOperator& op, const SolverOptions& options) {
    const SpectralReport r = eigen_spectrum(op, 1, options);
    if (r.eigenvalues.empty()) throw Error(ErrorKind::solver_failure, "no eigenvalue returned");
    return r.eigenvalues.front();
}

double eigenfunction_mass(std::span<const Complex> eigenvector, std::span<const double> region_indicator) {
    if (eigenvector.size() != region_indicator.size()) {
        throw Error(ErrorKind::invalid_argument, "eigenvector and region sizes differ");
    }
    double inside = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < eigenvector.size(); ++i) {
        const double p = std::norm(eigenvector[i]);
        inside += region_indicator[i] * p;
        total += p;
    }
    if (total == 0.0) throw Error(ErrorKind::zero_vector, "eigenvector is zero");
    return std::clamp(inside / total, 0.0, 1.0);
}

double compressed_operator_bottom(const Eigen::MatrixXcd& basis, std::span<const double> multiplier,
                                  double cell_volume) {
    if (static_cast<std::size_t>(basis.rows()) != multiplier.size()) {
        throw Error(ErrorKind::invalid_argument, "basis rows and multiplier size differ");
    }
    if (basis.cols() == 0) throw Error(ErrorKind::empty_window, "projector range is empty");
    const Eigen::MatrixXcd gram_identity = cell_volume * (basis.adjoint() * basis);
    const double defect =
        (gram_identity - Eigen::MatrixXcd::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-8) {
        throw Error(ErrorKind::non_orthonormal_basis, "Gram identity deviation " + std::to_string(defect));
    }
    const Eigen::Map<const Eigen::VectorXd> u(multiplier.data(), static_cast<Eigen::Index>(multiplier.size()));
    const Eigen::MatrixXcd g = cell_volume * (basis.adjoint() * u.cast<Complex>().asDiagonal() * basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

}  // namespace alloylab
