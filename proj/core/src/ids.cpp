#include "alloylab/ids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alloylab/error.hpp"
#include "alloylab/parallel.hpp"

namespace alloylab {

ComplementDomain complement_domain(const GridSpec& grid, const CenterPlacement& centers, double delta_plus) {
    ComplementDomain out;
    out.mask = support_mask(grid, centers, delta_plus);
    out.kept_dimension = static_cast<std::size_t>(std::count(out.mask.begin(), out.mask.end(), 0));
    if (out.kept_dimension == 0) throw Error(ErrorKind::empty_domain, "supports cover the whole box");
    return out;
}

namespace {

constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

void require_increasing(std::span<const double> xs, const char* what) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw Error(ErrorKind::invalid_argument, std::string(what) + " must increase");
    }
}

}  // namespace

IDSCurve ids_estimate(const AlloyModel& model, std::span<const double> energies, double lambda,
                      const SamplingOptions& options) {
    require_increasing(energies, "energy grid");
    if (options.n_samples == 0) throw Error(ErrorKind::invalid_argument, "n_samples must be >= 1");
    IDSCurve curve;
    curve.energies.assign(energies.begin(), energies.end());
    curve.lambda = lambda;
    curve.box_side = model.grid().side_length();
    curve.n_samples = options.n_samples;

    // counts[e][s]
    std::vector<std::vector<std::size_t>> counts(energies.size(), std::vector<std::size_t>(options.n_samples));
    parallel_for_index_or_throw(options.n_samples, options.threads, [&](std::size_t s) {
        const auto op = model.sample_operator(lambda, options.seed_base, s);
        for (std::size_t e = 0; e < energies.size(); ++e) {
            counts[e][s] = count_in_interval(op, {kMinusInfinity, energies[e]}, options.solver);
        }
    });
    const double volume = model.grid().box_volume();
    for (const auto& c : counts) {
        const auto m = summarize_counts(c);
        curve.values.push_back(m.mean / volume);
        curve.ci.push_back(m.halfwidth / volume);
    }
    return curve;
}

InterlacingReport interlacing_check(const AlloyModel& model, double lambda, std::size_t k_max,
                                    const SamplingOptions& options, std::vector<double> t_values) {
    const HermitianOperator complement = model.complement_operator();
    if (k_max == 0 || k_max > complement.dimension()) {
        throw Error(ErrorKind::precondition, "k_max must lie in [1, kept dimension]");
    }
    require_increasing(t_values, "t values");
    InterlacingReport report;
    report.samples = options.n_samples;
    report.k_max = k_max;
    report.complement_eigenvalues = eigen_spectrum(complement, k_max, options.solver).eigenvalues;
    const auto& mu_inf = report.complement_eigenvalues;

    std::vector<std::vector<double>> per_sample(options.n_samples);
    parallel_for_index_or_throw(options.n_samples, options.threads, [&](std::size_t s) {
        per_sample[s] = eigen_spectrum(model.sample_operator(lambda, options.seed_base, s), k_max, options.solver)
                            .eigenvalues;
    });
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& mu : per_sample) {
        for (std::size_t k = 0; k < k_max; ++k) {
            const double margin = mu_inf[k] - mu[k];
            report.worst_margin = std::min(report.worst_margin, margin);
            ++report.instances;
            if (margin < -1e-9) ++report.violations;
        }
    }

    report.t_values = std::move(t_values);
    report.coupled_eigenvalues.resize(report.t_values.size());
    parallel_for_index_or_throw(report.t_values.size(), options.threads, [&](std::size_t i) {
        report.coupled_eigenvalues[i] =
            eigen_spectrum(model.coupled_operator(report.t_values[i]), k_max, options.solver).eigenvalues;
    });
    for (std::size_t k = 0; k < k_max; ++k) {
        const double tol = 1e-9 * std::max(1.0, std::abs(mu_inf[k]));
        for (std::size_t i = 0; i < report.t_values.size(); ++i) {
            const double mu = report.coupled_eigenvalues[i][k];
            if (mu > mu_inf[k] + tol) report.t_monotone = false;
            if (i > 0 && mu < report.coupled_eigenvalues[i - 1][k] - tol) report.t_monotone = false;
        }
        if (!report.t_values.empty()) {
            const double gap = mu_inf[k] - report.coupled_eigenvalues.back()[k];
            report.final_relative_gap = std::max(report.final_relative_gap, gap / std::abs(mu_inf[k]));
        }
    }
    return report;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::vanishing: return "vanishing";
    case Verdict::persistent: return "persistent";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::skipped: return "skipped";
    }
    return "unknown";
}

DichotomyReport ids_dichotomy(const AlloyModel& model, std::span<const double> probes,
                              const std::vector<double>& lambda_grid, const SamplingOptions& options,
                              double e0_infinity_estimate) {
    if (model.disorder().placement != PlacementMode::periodic || !model.disorder().coupling.per_site.empty()) {
        throw Error(ErrorKind::precondition, "the dichotomy needs periodic centers and identical couplings");
    }
    require_increasing(lambda_grid, "lambda grid");
    DichotomyReport report;
    report.e0_infinity_estimate = e0_infinity_estimate;
    report.box_side = model.grid().side_length();
    report.lambdas = lambda_grid;

    std::optional<HermitianOperator> complement;
    try {
        complement.emplace(model.complement_operator());
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::empty_domain) throw;
    }
    if (!complement || !std::isfinite(e0_infinity_estimate)) {
        for (const double e : probes) {
            ProbeResult r;
            r.energy = e;
            r.verdict = Verdict::skipped;
            r.note = "supports cover the box; E0(infinity) is infinite";
            report.probes.push_back(std::move(r));
        }
        return report;
    }

    const double volume = model.grid().box_volume();
    for (const double e : probes) {
        ProbeResult r;
        r.energy = e;
        const SpectralWindow window{kMinusInfinity, e};
        const std::size_t floor_count = count_in_interval(*complement, window, options.solver);
        r.complement_density = static_cast<double>(floor_count) / volume;
        for (const double lambda : lambda_grid) {
            const WegnerCell cell = estimate_expected_trace(model, window, lambda, options);
            if (cell.failed) throw Error(ErrorKind::solver_failure, cell.failure);
            for (const std::size_t c : cell.counts) {
                if (c < floor_count) ++r.per_sample_violations;
            }
            r.values.push_back(cell.estimate / volume);
            r.ci.push_back(cell.ci_halfwidth / volume);
        }

        if (std::abs(e - e0_infinity_estimate) <= 0.1 * e0_infinity_estimate) {
            r.verdict = Verdict::inconclusive;
            r.note = "probe within 10% of the threshold";
        } else if (e < e0_infinity_estimate) {
            bool monotone = true;
            for (std::size_t i = 1; i < r.values.size(); ++i) {
                if (r.values[i] > r.values[i - 1] + r.ci[i] + r.ci[i - 1]) monotone = false;
            }
            const bool decays = r.values.back() < r.values.front() || r.values.back() == 0.0;
            r.verdict = monotone && decays ? Verdict::vanishing : Verdict::inconclusive;
            if (r.verdict == Verdict::inconclusive) r.note = "no decay along the lambda grid";
        } else {
            bool above = r.complement_density > 0.0 && r.per_sample_violations == 0;
            for (const double v : r.values) above = above && v >= r.complement_density - 1e-9;
            r.verdict = above ? Verdict::persistent : Verdict::inconclusive;
            if (r.verdict == Verdict::inconclusive) r.note = "complement count gives no positive floor";
        }
        report.probes.push_back(std::move(r));
    }
    return report;
}

}  // namespace alloylab
