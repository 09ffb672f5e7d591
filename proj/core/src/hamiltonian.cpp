#include "alloylab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "alloylab/error.hpp"
#include "alloylab/spectra.hpp"

namespace alloylab {

HermitianOperator::HermitianOperator(std::size_t dimension, std::vector<MatrixEntry> upper_entries,
                                     std::vector<std::size_t> grid_indices)
    : dimension_(dimension), grid_indices_(std::move(grid_indices)) {
    if (dimension == 0) throw Error(ErrorKind::empty_domain, "operator has dimension 0");
    if (grid_indices_.empty()) {
        grid_indices_.resize(dimension);
        for (std::size_t i = 0; i < dimension; ++i) grid_indices_[i] = i;
    } else if (grid_indices_.size() != dimension) {
        throw Error(ErrorKind::invalid_argument, "grid index map does not match dimension");
    }
    for (auto& e : upper_entries) {
        if (e.row > e.col || e.col >= dimension) {
            throw Error(ErrorKind::invalid_argument, "entries must satisfy row <= col < dimension");
        }
        if (e.row == e.col) e.value = Complex(e.value.real(), 0.0);
    }
    std::sort(upper_entries.begin(), upper_entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const auto& e : upper_entries) {
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
            entries_.back().value += e.value;
        } else {
            entries_.push_back(e);
        }
    }
    for (const auto& e : entries_) {
        bandwidth_ = std::max(bandwidth_, e.col - e.row);
        if (e.value.imag() != 0.0) real_ = false;
    }
}

std::vector<double> HermitianOperator::diagonal() const {
    std::vector<double> d(dimension_, 0.0);
    for (const auto& e : entries_) {
        if (e.row == e.col) d[e.row] += e.value.real();
    }
    return d;
}

Eigen::MatrixXcd HermitianOperator::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dimension_),
                                                static_cast<Eigen::Index>(dimension_));
    for (const auto& e : entries_) {
        const auto r = static_cast<Eigen::Index>(e.row);
        const auto c = static_cast<Eigen::Index>(e.col);
        m(r, c) = e.value;
        m(c, r) = std::conj(e.value);
    }
    return m;
}

Eigen::SparseMatrix<Complex> HermitianOperator::to_sparse() const {
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(2 * entries_.size());
    for (const auto& e : entries_) {
        const auto r = static_cast<Eigen::Index>(e.row);
        const auto c = static_cast<Eigen::Index>(e.col);
        triplets.emplace_back(r, c, e.value);
        if (r != c) triplets.emplace_back(c, r, std::conj(e.value));
    }
    Eigen::SparseMatrix<Complex> m(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

Eigen::VectorXcd HermitianOperator::apply(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (const auto& e : entries_) {
        const auto r = static_cast<Eigen::Index>(e.row);
        const auto c = static_cast<Eigen::Index>(e.col);
        out(r) += e.value * v(c);
        if (r != c) out(c) += std::conj(e.value) * v(r);
    }
    return out;
}

HermitianOperator HermitianOperator::shifted(double c) const {
    return plus_diagonal(std::vector<double>(dimension_, c));
}

HermitianOperator HermitianOperator::plus_diagonal(std::span<const double> values) const {
    if (values.size() != dimension_) throw Error(ErrorKind::invalid_argument, "diagonal size mismatch");
    std::vector<MatrixEntry> entries = entries_;
    for (std::size_t i = 0; i < dimension_; ++i) entries.push_back({i, i, Complex(values[i], 0.0)});
    return HermitianOperator(dimension_, std::move(entries), grid_indices_);
}

std::vector<double> HermitianOperator::restrict_to_domain(std::span<const double> grid_values) const {
    std::vector<double> out(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) {
        if (grid_indices_[i] >= grid_values.size()) {
            throw Error(ErrorKind::invalid_argument, "grid field shorter than operator domain");
        }
        out[i] = grid_values[grid_indices_[i]];
    }
    return out;
}

namespace {

std::vector<double> offdiagonal_row_sums(const HermitianOperator& op) {
    std::vector<double> s(op.dimension(), 0.0);
    for (const auto& e : op.entries()) {
        if (e.row == e.col) continue;
        s[e.row] += std::abs(e.value);
        s[e.col] += std::abs(e.value);
    }
    return s;
}

}  // namespace

double HermitianOperator::gershgorin_lower() const {
    const auto d = diagonal();
    const auto s = offdiagonal_row_sums(*this);
    double lo = d[0] - s[0];
    for (std::size_t i = 1; i < dimension_; ++i) lo = std::min(lo, d[i] - s[i]);
    return lo;
}

double HermitianOperator::gershgorin_upper() const {
    const auto d = diagonal();
    const auto s = offdiagonal_row_sums(*this);
    double hi = d[0] + s[0];
    for (std::size_t i = 1; i < dimension_; ++i) hi = std::max(hi, d[i] + s[i]);
    return hi;
}

double HermitianOperator::hermiticity_defect() const {
    const Eigen::MatrixXcd m = to_dense();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

double evaluate(const FieldSource& source, const GridSpec& grid, std::size_t index, const Point& x) {
    if (const auto* f = std::get_if<ScalarFunction>(&source)) {
        return *f ? (*f)(x) : 0.0;
    }
    const auto& table = std::get<TabulatedField>(source);
    if (table.values.size() != grid.size()) {
        throw Error(ErrorKind::invalid_argument, "tabulated field size does not match grid");
    }
    return table.values[index];
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw Error(ErrorKind::non_finite_sample, std::string(what) + " is not finite on the box");
}

}  // namespace

TabulatedField load_tabulated_csv(const std::string& path, const GridSpec& grid) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open tabulated field '" + path + "'");
    TabulatedField table;
    table.values.assign(grid.size(), 0.0);
    std::vector<std::uint8_t> seen(grid.size(), 0);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        Coords c{0, 0, 0};
        bool ok = true;
        for (int k = 0; k < grid.dim(); ++k) ok = ok && static_cast<bool>(row >> c[static_cast<std::size_t>(k)]);
        double v = 0.0;
        ok = ok && static_cast<bool>(row >> v);
        if (!ok) {
            if (line_no == 1) continue;  // header
            throw Error(ErrorKind::config_invalid, path + ":" + std::to_string(line_no) + ": malformed row");
        }
        for (int k = 0; k < grid.dim(); ++k) {
            const int ck = c[static_cast<std::size_t>(k)];
            if (ck < 0 || ck >= grid.points_per_side()) {
                throw Error(ErrorKind::config_invalid, path + ":" + std::to_string(line_no) + ": index out of range");
            }
        }
        const std::size_t idx = grid.index(c);
        table.values[idx] = v;
        seen[idx] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw Error(ErrorKind::config_invalid, path + ": not every grid point is tabulated");
    }
    return table;
}

BackgroundField zero_background(const GridSpec& grid) {
    BackgroundField bg;
    bg.link_potential.assign(static_cast<std::size_t>(grid.dim()), std::vector<double>(grid.size(), 0.0));
    bg.scalar_potential.assign(grid.size(), 0.0);
    return bg;
}

BackgroundField sample_background(const FieldDescription& description, const GridSpec& grid) {
    if (description.vector_potential.size() > static_cast<std::size_t>(grid.dim())) {
        throw Error(ErrorKind::invalid_argument, "more vector potential components than dimensions");
    }
    BackgroundField bg = zero_background(grid);
    const double h = grid.spacing();
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const Point x = grid.position(p);
        const double v0 = evaluate(description.scalar_potential, grid, p, x);
        require_finite(v0, "V0");
        bg.scalar_potential[p] = v0;
        for (std::size_t k = 0; k < description.vector_potential.size(); ++k) {
            const int axis = static_cast<int>(k);
            if (!grid.has_forward_neighbor(p, axis)) continue;
            const FieldSource& src = description.vector_potential[k];
            double a = 0.0;
            if (std::holds_alternative<TabulatedField>(src)) {
                const std::size_t q = p + grid.stride(axis);
                a = 0.5 * (evaluate(src, grid, p, x) + evaluate(src, grid, q, x));
            } else {
                Point mid = x;
                mid[k] += 0.5 * h;
                a = evaluate(src, grid, p, mid);
            }
            require_finite(a, "A0");
            bg.link_potential[k][p] = a;
        }
    }
    return bg;
}

HermitianOperator assemble_hamiltonian(const GridSpec& grid, const BackgroundField& background,
                                       std::span<const double> extra_potential, const DomainMask& domain_mask) {
    const std::size_t n = grid.size();
    if (background.scalar_potential.size() != n ||
        background.link_potential.size() != static_cast<std::size_t>(grid.dim())) {
        throw Error(ErrorKind::invalid_argument, "background field not sampled on this grid");
    }
    if (!extra_potential.empty() && extra_potential.size() != n) {
        throw Error(ErrorKind::invalid_argument, "extra potential size does not match grid");
    }
    if (!domain_mask.empty() && domain_mask.size() != n) {
        throw Error(ErrorKind::invalid_argument, "domain mask size does not match grid");
    }
    const auto removed = [&](std::size_t p) { return !domain_mask.empty() && domain_mask[p] != 0; };

    constexpr std::size_t dropped = static_cast<std::size_t>(-1);
    std::vector<std::size_t> row_of(n, dropped);
    std::vector<std::size_t> kept;
    kept.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (removed(p)) continue;
        row_of[p] = kept.size();
        kept.push_back(p);
    }
    if (kept.empty()) throw Error(ErrorKind::empty_domain, "domain mask removes every grid point");

    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double diag0 = 2.0 * grid.dim() * inv_h2;

    std::vector<MatrixEntry> entries;
    entries.reserve(kept.size() * static_cast<std::size_t>(1 + grid.dim()));
    for (const std::size_t p : kept) {
        double d = diag0 + background.scalar_potential[p] + background.energy_shift;
        if (!extra_potential.empty()) d += extra_potential[p];
        entries.push_back({row_of[p], row_of[p], Complex(d, 0.0)});
        for (int k = 0; k < grid.dim(); ++k) {
            if (!grid.has_forward_neighbor(p, k)) continue;
            const std::size_t q = p + grid.stride(k);
            if (removed(q)) continue;
            const double a = background.link_potential[static_cast<std::size_t>(k)][p];
            const Complex hop = a == 0.0 ? Complex(-inv_h2, 0.0) : -inv_h2 * std::polar(1.0, -h * a);
            entries.push_back({row_of[p], row_of[q], hop});
        }
    }
    const std::size_t dimension = kept.size();
    return HermitianOperator(dimension, std::move(entries), std::move(kept));
}

BackgroundField gauge_transform(const BackgroundField& background, const GridSpec& grid,
                                std::span<const double> gauge_function) {
    if (gauge_function.size() != grid.size()) {
        throw Error(ErrorKind::invalid_argument, "gauge function size does not match grid");
    }
    BackgroundField out = background;
    const double h = grid.spacing();
    for (int k = 0; k < grid.dim(); ++k) {
        auto& links = out.link_potential[static_cast<std::size_t>(k)];
        for (std::size_t p = 0; p < grid.size(); ++p) {
            if (!grid.has_forward_neighbor(p, k)) continue;
            links[p] += (gauge_function[p + grid.stride(k)] - gauge_function[p]) / h;
        }
    }
    return out;
}

FieldNorms field_norms(const BackgroundField& background, const GridSpec& grid) {
    FieldNorms norms;
    const double h = grid.spacing();
    const int n = grid.points_per_side();
    double max_link = 0.0;
    double max_point_a = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const Coords c = grid.coords(p);
        double a2 = 0.0;
        double div = 0.0;
        for (int k = 0; k < grid.dim(); ++k) {
            const auto& links = background.link_potential[static_cast<std::size_t>(k)];
            const std::size_t s = grid.stride(k);
            const int ck = c[static_cast<std::size_t>(k)];
            if (ck < n - 1) max_link = std::max(max_link, std::abs(links[p]));
            // Links adjacent to p along axis k: behind (p - s -> p) and ahead (p -> p + s).
            const bool behind = ck > 0;
            const bool ahead = ck < n - 1;
            double ak = 0.0;
            if (behind && ahead) {
                ak = 0.5 * (links[p - s] + links[p]);
                div += (links[p] - links[p - s]) / h;
            } else if (ahead) {
                ak = links[p];
                if (ck + 2 < n) div += (links[p + s] - links[p]) / h;
            } else if (behind) {
                ak = links[p - s];
                if (ck >= 2) div += (links[p - s] - links[p - 2 * s]) / h;
            }
            a2 += ak * ak;
        }
        max_point_a = std::max(max_point_a, std::sqrt(a2));
        const double v0 = background.scalar_potential[p];
        norms.norm_V0 = std::max(norms.norm_V0, std::abs(v0));
        norms.norm_divA = std::max(norms.norm_divA, std::abs(div));
        norms.norm_c = std::max(norms.norm_c, std::hypot(v0 + a2, div));
    }
    norms.norm_b = 2.0 * std::max(max_link, max_point_a);
    return norms;
}

BackgroundField normalize_ground_energy(const BackgroundField& background, const GridSpec& grid) {
    const double e = ground_energy(assemble_hamiltonian(grid, background));
    BackgroundField out = background;
    out.energy_shift -= e;
    return out;
}

}  // namespace alloylab
