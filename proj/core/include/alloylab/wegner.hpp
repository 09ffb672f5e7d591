#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "alloylab/disorder.hpp"
#include "alloylab/model.hpp"
#include "alloylab/spectra.hpp"

namespace alloylab {

struct SamplingOptions {
    std::size_t n_samples = 200;
    /// Sample i of every cell uses omega(seed_base, i), so cells that differ
    /// only in lambda or window see the same configurations.
    std::uint64_t seed_base = 0;
    unsigned threads = 1;
    /// Stop after a batch once the CI halfwidth drops below 5% of the mean.
    bool early_stop = false;
    std::size_t batch_size = 50;
    SolverOptions solver;
};

struct WegnerCell {
    SpectralWindow window;
    double lambda = 0.0;
    double box_side = 0.0;
    int dim = 1;
    std::size_t n_samples = 0;
    double estimate = 0.0;
    /// 95% normal interval, 1.96 s / sqrt(n).
    double ci_halfwidth = 0.0;
    std::uint64_t seed_base = 0;
    double eta_bound = std::numeric_limits<double>::quiet_NaN();
    double theoretical_bound = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> counts;
    bool failed = false;
    std::string failure;

    double box_volume() const;
};

/// Mean of Tr chi_window(H_omega,L) over samples. A solver error marks the
/// cell failed and is recorded rather than dropping the sample.
WegnerCell estimate_expected_trace(const AlloyModel& model, SpectralWindow window, double lambda,
                                   const SamplingOptions& options);

struct MeanAndHalfwidth {
    double mean = 0.0;
    double halfwidth = 0.0;
};

/// Pairwise-summed mean and 95% halfwidth of integer counts.
MeanAndHalfwidth summarize_counts(const std::vector<std::size_t>& counts);

enum class ScalingAxis { interval_width, volume, disorder };

struct ScalingFit {
    ScalingAxis axis = ScalingAxis::interval_width;
    double log_slope = 0.0;
    /// 95% halfwidth of the slope from the regression residuals (0 for 2 points).
    double slope_ci = 0.0;
    double log_intercept = 0.0;
    std::vector<std::pair<double, double>> points;
    std::size_t excluded_zero = 0;
};

struct LogLogFit {
    double slope = 0.0;
    double slope_ci = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares of log y on log x; all values must be positive.
LogLogFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log(estimate) against log(|I|), log(L^d) or log(lambda).
ScalingFit scaling_fit(const std::vector<WegnerCell>& cells, ScalingAxis axis);

/// Unspecified leading constants of the three bounds.
struct LeadingConstants {
    double C1 = 1.0;
    double C2 = 1.0;
    double C3 = 1.0;
};

/// Inputs of the bound formulas. S is taken from `concentration_value` when
/// set, otherwise computed from `distribution` at |I| / lambda.
struct BoundParameters {
    int dim = 1;
    std::optional<double> box_volume;
    std::optional<double> window_width;
    std::optional<double> lambda;
    std::optional<double> support_max;
    std::optional<CouplingLaw> distribution;
    std::optional<double> concentration_value;
    std::optional<double> u_minus;
    std::optional<double> gamma2;
    std::optional<double> E0;
    std::optional<double> kappa0;
    std::optional<double> E1;
};

/// Right-hand sides of the three Wegner bounds. The exponents
/// 2^(k + log d / log 2) are evaluated as 2^k d.
///   1: C1 (1 + (lambda M)^(4d)) S(|I| / lambda) L^d
///   2: C2 (u_-^-2 gamma2^-4 (1 + E0))^(2d) S L^d
///   3: C3 (kappa0^-2 (1 + E1))^(2d) S L^d
double theoretical_bound(int theorem, const BoundParameters& parameters, const LeadingConstants& constants);

/// Cells of a lambda sweep, each with the eta-configuration count as eta_bound.
std::vector<WegnerCell> disorder_sweep(const AlloyModel& model, SpectralWindow window,
                                       const std::vector<double>& lambda_grid, const SamplingOptions& options);

/// Smallest count over all omega in {0, M}^sites; only for at most 6 sites.
std::size_t corner_minimum_count(const AlloyModel& model, SpectralWindow window, double lambda,
                                 const SolverOptions& solver = {});

struct CalibrationReport {
    double leading_constant = 0.0;
    std::size_t reference = 0;
    /// Cells with estimate > bound (1 + 3 ci / estimate).
    std::vector<std::size_t> violations;
};

/// Scales theoretical_bound (evaluated with leading constant 1) so it equals
/// the estimate on the reference cell, then checks every other cell.
CalibrationReport calibrate_bounds(std::vector<WegnerCell>& cells, std::size_t reference);

}  // namespace alloylab
