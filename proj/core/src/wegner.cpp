#include "alloylab/wegner.hpp"

#include <algorithm>
#include <cmath>

#include "alloylab/error.hpp"
#include "alloylab/parallel.hpp"

namespace alloylab {

double WegnerCell::box_volume() const { return std::pow(box_side, dim); }

MeanAndHalfwidth summarize_counts(const std::vector<std::size_t>& counts) {
    MeanAndHalfwidth out;
    if (counts.empty()) return out;
    const auto n = static_cast<double>(counts.size());
    std::vector<double> v(counts.begin(), counts.end());
    out.mean = pairwise_sum(v) / n;
    if (counts.size() < 2) return out;
    for (double& x : v) x = (x - out.mean) * (x - out.mean);
    const double variance = pairwise_sum(v) / (n - 1.0);
    out.halfwidth = 1.96 * std::sqrt(variance / n);
    return out;
}

WegnerCell estimate_expected_trace(const AlloyModel& model, SpectralWindow window, double lambda,
                                   const SamplingOptions& options) {
    if (options.n_samples == 0) throw Error(ErrorKind::invalid_argument, "n_samples must be >= 1");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::invalid_argument, "lambda must be finite and >= 0");
    }
    WegnerCell cell;
    cell.window = window;
    cell.lambda = lambda;
    cell.box_side = model.grid().side_length();
    cell.dim = model.grid().dim();
    cell.seed_base = options.seed_base;

    const std::size_t batch = options.early_stop ? std::max<std::size_t>(1, options.batch_size) : options.n_samples;
    std::vector<std::size_t> counts;
    for (std::size_t start = 0; start < options.n_samples; start += batch) {
        const std::size_t stop = std::min(options.n_samples, start + batch);
        std::vector<std::size_t> chunk(stop - start, 0);
        const auto errors = parallel_for_index(chunk.size(), options.threads, [&](std::size_t i) {
            const auto op = model.sample_operator(lambda, options.seed_base, start + i);
            chunk[i] = count_in_interval(op, window, options.solver);
        });
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (!errors[i]) continue;
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.failure = "sample " + std::to_string(start + i) + ": " + e.what();
            }
            break;
        }
        if (cell.failed) break;
        counts.insert(counts.end(), chunk.begin(), chunk.end());
        if (options.early_stop && counts.size() >= 2) {
            const auto s = summarize_counts(counts);
            if (s.mean > 0.0 && s.halfwidth < 0.05 * s.mean) break;
        }
    }
    const auto s = summarize_counts(counts);
    cell.counts = std::move(counts);
    cell.n_samples = cell.counts.size();
    cell.estimate = s.mean;
    cell.ci_halfwidth = s.halfwidth;
    return cell;
}

LogLogFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorKind::insufficient_points, "log-log fit needs at least 2 paired points");
    }
    std::vector<double> lx(x.size());
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorKind::invalid_argument, "log-log fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const auto n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorKind::insufficient_points, "all abscissae coincide");
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (lx.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            const double r = ly[i] - fit.intercept - fit.slope * lx[i];
            rss += r * r;
        }
        fit.slope_ci = 1.96 * std::sqrt(rss / (n - 2.0) / sxx);
    }
    return fit;
}

ScalingFit scaling_fit(const std::vector<WegnerCell>& cells, ScalingAxis axis) {
    ScalingFit fit;
    fit.axis = axis;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& c : cells) {
        double x = 0.0;
        switch (axis) {
        case ScalingAxis::interval_width: x = c.window.width(); break;
        case ScalingAxis::volume: x = c.box_volume(); break;
        case ScalingAxis::disorder: x = c.lambda; break;
        }
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw Error(ErrorKind::invalid_argument, "scaling abscissa must be positive and finite");
        }
        fit.points.emplace_back(x, c.estimate);
        if (c.estimate > 0.0) {
            xs.push_back(x);
            ys.push_back(c.estimate);
        } else {
            ++fit.excluded_zero;
        }
    }
    if (cells.size() < 4) throw Error(ErrorKind::insufficient_points, "scaling fit needs at least 4 cells");
    if (xs.empty()) throw Error(ErrorKind::all_zero_estimates, "every estimate is zero");
    if (xs.size() < 2) throw Error(ErrorKind::insufficient_points, "fewer than 2 positive estimates");

    const LogLogFit f = log_log_fit(xs, ys);
    fit.log_slope = f.slope;
    fit.slope_ci = f.slope_ci;
    fit.log_intercept = f.intercept;
    return fit;
}

namespace {

double need(const std::optional<double>& v, const char* name) {
    if (!v) throw Error(ErrorKind::missing_parameter, std::string("bound needs ") + name);
    return *v;
}

double concentration_term(const BoundParameters& p) {
    if (p.concentration_value) return *p.concentration_value;
    if (!p.distribution) throw Error(ErrorKind::missing_parameter, "bound needs a distribution or S value");
    const double width = need(p.window_width, "window_width");
    const double lambda = need(p.lambda, "lambda");
    if (lambda == 0.0) return 1.0;  // the rescaled window covers the whole support
    return concentration(*p.distribution, width / lambda);
}

}  // namespace

double theoretical_bound(int theorem, const BoundParameters& p, const LeadingConstants& constants) {
    const double volume = need(p.box_volume, "box_volume");
    const double d = p.dim;
    switch (theorem) {
    case 1: {
        const double lm = need(p.lambda, "lambda") * need(p.support_max, "support_max");
        return constants.C1 * (1.0 + std::pow(lm, 4.0 * d)) * concentration_term(p) * volume;
    }
    case 2: {
        const double u = need(p.u_minus, "u_minus");
        const double g = need(p.gamma2, "gamma2");
        const double base = (1.0 + need(p.E0, "E0")) / (u * u * std::pow(g, 4.0));
        return constants.C2 * std::pow(base, 2.0 * d) * concentration_term(p) * volume;
    }
    case 3: {
        const double k = need(p.kappa0, "kappa0");
        const double base = (1.0 + need(p.E1, "E1")) / (k * k);
        return constants.C3 * std::pow(base, 2.0 * d) * concentration_term(p) * volume;
    }
    default:
        throw Error(ErrorKind::invalid_argument, "theorem must be 1, 2 or 3");
    }
}

std::vector<WegnerCell> disorder_sweep(const AlloyModel& model, SpectralWindow window,
                                       const std::vector<double>& lambda_grid, const SamplingOptions& options) {
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0) || (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))) {
            throw Error(ErrorKind::invalid_argument, "lambda grid must be positive and increasing");
        }
    }
    std::vector<WegnerCell> cells;
    cells.reserve(lambda_grid.size());
    for (const double lambda : lambda_grid) {
        WegnerCell cell = estimate_expected_trace(model, window, lambda, options);
        cell.eta_bound = static_cast<double>(count_in_interval(model.eta_operator(lambda), window, options.solver));
        cells.push_back(std::move(cell));
    }
    return cells;
}

std::size_t corner_minimum_count(const AlloyModel& model, SpectralWindow window, double lambda,
                                 const SolverOptions& solver) {
    const auto& sites = model.centers().sites;
    if (sites.size() > 6) throw Error(ErrorKind::precondition, "corner enumeration limited to 6 sites");
    std::size_t best = model.free_operator().dimension();
    for (std::size_t mask = 0; mask < (std::size_t{1} << sites.size()); ++mask) {
        OmegaSample omega = constant_omega(model.centers(), 0.0);
        for (std::size_t s = 0; s < sites.size(); ++s) {
            if (mask & (std::size_t{1} << s)) omega.values[s] = model.disorder().coupling.at(sites[s]).support_max;
        }
        best = std::min(best, count_in_interval(model.random_operator(omega, lambda), window, solver));
    }
    return best;
}

CalibrationReport calibrate_bounds(std::vector<WegnerCell>& cells, std::size_t reference) {
    if (reference >= cells.size()) throw Error(ErrorKind::invalid_argument, "reference cell out of range");
    const WegnerCell& ref = cells[reference];
    if (!(ref.theoretical_bound > 0.0) || !(ref.estimate > 0.0)) {
        throw Error(ErrorKind::precondition, "reference cell needs a positive estimate and bound");
    }
    CalibrationReport report;
    report.reference = reference;
    report.leading_constant = ref.estimate / ref.theoretical_bound;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto& c = cells[i];
        c.theoretical_bound *= report.leading_constant;
        if (i == reference || c.estimate == 0.0) continue;
        if (c.estimate > c.theoretical_bound * (1.0 + 3.0 * c.ci_halfwidth / c.estimate)) {
            report.violations.push_back(i);
        }
    }
    return report;
}

}  // namespace alloylab
