#include "alloylab/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alloylab/error.hpp"
#include "alloylab/parallel.hpp"
#include "alloylab/spectra.hpp"

namespace alloylab {

namespace {

void require_delta(double delta) {
    // 1/2 itself is admitted: the constants stay in (0, 1) there.
    if (!(delta > 0.0 && delta <= 0.5)) throw Error(ErrorKind::invalid_delta, "delta must lie in (0, 1/2]");
}

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::invalid_argument, std::string(what) + " must be finite and >= 0");
    }
}

double cbrt2(double x) { return std::cbrt(x * x); }  // |x|^(2/3)

}  // namespace

void UCPConstants::validate() const {
    if (!(N1 >= 1.0) || !(N2 >= 1.0)) throw Error(ErrorKind::invalid_argument, "N1 and N2 must be >= 1");
}

double gamma1(double delta_minus, double E0, const FieldNorms& norms, const UCPConstants& constants) {
    require_delta(delta_minus);
    constants.validate();
    if (!(E0 > 0.0)) throw Error(ErrorKind::invalid_argument, "E0 must be positive");
    const double exponent = constants.N2 * (1.0 + cbrt2(E0) + norms.norm_b * norms.norm_b + cbrt2(norms.norm_c));
    return std::sqrt(0.5 * std::pow(delta_minus, exponent));
}

double gamma2(double delta_minus, double E0, const FieldNorms& norms, double lambda, double M, double delta_plus,
              int dim, const UCPConstants& constants) {
    require_delta(delta_minus);
    constants.validate();
    if (!(E0 > 0.0)) throw Error(ErrorKind::invalid_argument, "E0 must be positive");
    require_nonnegative(lambda, "lambda");
    require_nonnegative(M, "M");
    require_nonnegative(delta_plus, "delta_plus");
    const double c = norms.norm_c + lambda * M * std::pow(2.0 + delta_plus, dim);
    const double exponent = constants.N2 * (1.0 + cbrt2(E0) + norms.norm_b * norms.norm_b + cbrt2(c));
    return 0.5 * std::pow(delta_minus, exponent);
}

double csfuc(double delta, double normV, double norm_b, double norm_c, const UCPConstants& constants) {
    require_delta(delta);
    constants.validate();
    return std::pow(delta, constants.N1 * (1.0 + cbrt2(normV) + norm_b * norm_b + cbrt2(norm_c)));
}

double e0_lower_bound(double t, double u_minus, double delta_minus, double normV0, double norm_b, double norm_c,
                      const UCPConstants& constants) {
    require_nonnegative(t, "t");
    require_delta(delta_minus);
    constants.validate();
    if (t == 0.0) return 0.0;
    const double s = t * u_minus;
    return s * std::pow(delta_minus,
                        constants.N1 * (1.0 + cbrt2(normV0 + s) + norm_b * norm_b + cbrt2(norm_c)));
}

E0BoundSupremum e0_infinity_lower_bound(std::span<const double> t_grid, double u_minus, double delta_minus,
                                        double normV0, double norm_b, double norm_c, const UCPConstants& constants) {
    E0BoundSupremum best;
    for (const double t : t_grid) {
        const double v = e0_lower_bound(t, u_minus, delta_minus, normV0, norm_b, norm_c, constants);
        if (v > best.value) best = {t, v};
    }
    return best;
}

double ucp_gamma(double delta, double E0, const FieldNorms& norms, const UCPConstants& constants) {
    require_delta(delta);
    constants.validate();
    const double exponent =
        constants.N2 * (1.0 + cbrt2(E0) + norms.norm_b * norms.norm_b + cbrt2(norms.norm_c));
    return std::sqrt(std::pow(delta, exponent));
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw Error(ErrorKind::invalid_argument, "log grid needs 0 < lo < hi, n >= 2");
    std::vector<double> g(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_t_grid() { return log_grid(1e-2, 1e6, 30); }

ThresholdCurve e0_curve(const AlloyModel& model, std::span<const double> t_grid, unsigned threads) {
    if (t_grid.empty()) throw Error(ErrorKind::invalid_argument, "t grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
            throw Error(ErrorKind::invalid_argument, "t grid must be positive and increasing");
        }
    }
    ThresholdCurve curve;
    curve.t_values.assign(t_grid.begin(), t_grid.end());
    curve.e0_values.assign(t_grid.size(), 0.0);
    curve.box_side = model.grid().side_length();
    curve.points_per_side = model.grid().points_per_side();
    parallel_for_index_or_throw(t_grid.size(), threads, [&](std::size_t i) {
        curve.e0_values[i] = ground_energy(model.coupled_operator(t_grid[i]));
    });

    try {
        curve.e0_infinity_cross_check = ground_energy(model.complement_operator());
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::empty_domain) throw;
        curve.e0_infinity_cross_check = std::numeric_limits<double>::infinity();
    }

    const auto tol = [](double e) { return 1e-8 * std::max(1.0, std::abs(e)); };
    for (std::size_t i = 1; i < curve.e0_values.size(); ++i) {
        if (curve.e0_values[i] < curve.e0_values[i - 1] - tol(curve.e0_values[i - 1])) {
            throw Error(ErrorKind::non_monotone_result, "E0(t) decreases between grid points " +
                                                            std::to_string(i - 1) + " and " + std::to_string(i));
        }
    }
    const double top = curve.e0_values.back();
    if (std::isfinite(curve.e0_infinity_cross_check) &&
        top > curve.e0_infinity_cross_check + tol(curve.e0_infinity_cross_check)) {
        throw Error(ErrorKind::non_monotone_result, "E0(t_max) exceeds the complement-domain ground energy");
    }
    curve.e0_infinity_estimate = top;
    if (std::isfinite(curve.e0_infinity_cross_check) && curve.e0_infinity_cross_check != 0.0) {
        curve.relative_discrepancy =
            std::abs(curve.e0_infinity_cross_check - top) / std::abs(curve.e0_infinity_cross_check);
    } else {
        curve.relative_discrepancy = std::numeric_limits<double>::infinity();
    }
    curve.discrepancy_flagged = curve.relative_discrepancy > 0.05;
    return curve;
}

double kappa0(const ThresholdCurve& curve, double E1) {
    if (!(E1 > 0.0)) throw Error(ErrorKind::invalid_argument, "E1 must be positive");
    if (E1 >= curve.e0_infinity_estimate) {
        throw Error(ErrorKind::e1_above_threshold, "E1 is not below the E0(infinity) estimate");
    }
    double best = -1.0;
    for (std::size_t i = 0; i < curve.t_values.size(); ++i) {
        const double e = curve.e0_values[i];
        if (e >= E1) best = std::max(best, (e - E1) / curve.t_values[i]);
    }
    if (best < 0.0) throw Error(ErrorKind::empty_feasible_set, "no grid point has E0(s) >= E1");
    return best;
}

}  // namespace alloylab
