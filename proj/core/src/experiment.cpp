#include "alloylab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "alloylab/error.hpp"
#include "alloylab/ids.hpp"
#include "alloylab/parallel.hpp"
#include "alloylab/spectra.hpp"
#include "alloylab/thresholds.hpp"
#include "alloylab/wegner.hpp"

namespace alloylab {

namespace {

using ojson = nlohmann::ordered_json;
using alloylab::format_number;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// JSON has no infinities; they are written as strings.
ojson number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v, int) { return std::to_string(v); }

struct Context {
    const ExperimentConfig& config;
    RunManifest& manifest;
    std::filesystem::path out;
    unsigned threads;
    std::uint64_t master_seed;

    void write(const std::string& name, const std::string& content) {
        manifest.files.push_back(write_output(out, name, content));
    }
    void write_json(const std::string& name, const ojson& j) { write(name, j.dump(2) + "\n"); }
    void cell(std::string id, bool ok = true, std::string message = {}) {
        manifest.cells.push_back({std::move(id), ok, std::move(message)});
    }
    SamplingOptions sampling(std::size_t n, bool early_stop = false) const {
        SamplingOptions s;
        s.n_samples = n;
        s.seed_base = master_seed;
        s.threads = threads;
        s.early_stop = early_stop;
        return s;
    }
};

ojson constants_json(const ExperimentConfig& c) {
    return {{"N1", c.ucp.N1}, {"N2", c.ucp.N2}, {"C1", c.leading.C1}, {"C2", c.leading.C2}, {"C3", c.leading.C3}};
}

ojson norms_json(const FieldNorms& n) {
    return {{"norm_b", n.norm_b}, {"norm_c", n.norm_c}, {"norm_V0", n.norm_V0}, {"norm_divA", n.norm_divA}};
}

ojson curve_summary(const ThresholdCurve& c) {
    return {{"estimate", number(c.e0_infinity_estimate)},
            {"cross_check", number(c.e0_infinity_cross_check)},
            {"relative_discrepancy", number(c.relative_discrepancy)},
            {"discrepancy_flagged", c.discrepancy_flagged},
            {"t_max", c.t_values.back()},
            {"box_side", c.box_side},
            {"points_per_side", c.points_per_side}};
}

std::string window_id(const SpectralWindow& w) { return "[" + fmt(w.lower) + "," + fmt(w.upper) + "]"; }

const std::vector<std::string> kWegnerHeader{"lambda",   "box_side", "window_lower", "window_upper",
                                             "estimate", "ci",       "n_samples",    "eta_bound",
                                             "theoretical_bound", "seed_base"};

std::vector<std::string> wegner_row(const WegnerCell& c) {
    const double est = c.failed ? std::numeric_limits<double>::quiet_NaN() : c.estimate;
    const double ci = c.failed ? std::numeric_limits<double>::quiet_NaN() : c.ci_halfwidth;
    return {fmt(c.lambda),    fmt(c.box_side),  fmt(c.window.lower),        fmt(c.window.upper),
            fmt(est),         fmt(ci),          fmt(c.n_samples),           fmt(c.eta_bound),
            fmt(c.theoretical_bound), fmt(c.seed_base, 0)};
}

// ---------------------------------------------------------------- wegner-sweep

void run_wegner_sweep(Context& ctx, const WegnerSweepSpec& spec) {
    const auto& cfg = ctx.config;
    std::vector<double> sides = spec.box_sides;
    if (sides.empty()) sides.push_back(cfg.model.side_length);
    const bool needs_threshold =
        spec.theorem == 3 ||
        std::any_of(spec.windows.begin(), spec.windows.end(), [](const WindowSpec& w) { return w.needs_threshold(); });

    std::vector<WegnerCell> cells;
    ojson boxes = ojson::array();
    for (const double side : sides) {
        const GridSpec grid = spec.box_sides.empty() ? cfg.model.grid() : cfg.model.grid_with_side(side);
        const AlloyModel model = cfg.model.build(grid);
        const FieldNorms norms = field_norms(model.background(), grid);
        std::optional<ThresholdCurve> curve;
        if (needs_threshold) curve = e0_curve(model, spec.t_grid, ctx.threads);
        const double e0_inf = curve ? curve->e0_infinity_estimate : kInf;
        ojson box{{"box_side", grid.side_length()}, {"points_per_side", grid.points_per_side()},
                  {"spacing", grid.spacing()}, {"norms", norms_json(norms)}};
        if (curve) box["e0_infinity"] = curve_summary(*curve);
        boxes.push_back(box);

        for (const double lambda : spec.lambdas) {
            for (const auto& ws : spec.windows) {
                const SpectralWindow window = ws.resolve(e0_inf);
                WegnerCell cell = estimate_expected_trace(model, window, lambda,
                                                          ctx.sampling(spec.n_samples, spec.early_stop));
                const std::string id = "L=" + fmt(grid.side_length()) + " lambda=" + fmt(lambda) +
                                       " window=" + window_id(window);
                try {
                    cell.eta_bound =
                        static_cast<double>(count_in_interval(model.eta_operator(lambda), window));
                } catch (const Error& e) {
                    cell.failed = true;
                    cell.failure = std::string("eta bound: ") + e.what();
                }
                BoundParameters p;
                p.dim = grid.dim();
                p.box_volume = grid.box_volume();
                p.window_width = window.width();
                p.lambda = lambda;
                p.support_max = model.support_max();
                p.distribution = model.disorder().coupling;
                p.u_minus = model.disorder().profile.floor;
                try {
                    if (spec.theorem == 2) {
                        p.E0 = window.upper;
                        p.gamma2 = gamma2(model.disorder().profile.inner_radius, window.upper, norms, lambda,
                                          model.support_max(), model.disorder().profile.outer_side, grid.dim(),
                                          cfg.ucp);
                    } else if (spec.theorem == 3) {
                        p.E1 = window.upper;
                        p.kappa0 = kappa0(*curve, window.upper);
                    }
                    cell.theoretical_bound = theoretical_bound(spec.theorem, p, LeadingConstants{});
                } catch (const Error&) {
                    cell.theoretical_bound = std::numeric_limits<double>::quiet_NaN();
                }
                ctx.cell(id, !cell.failed, cell.failure);
                cells.push_back(std::move(cell));
            }
        }
    }

    ojson summary{{"kind", "wegner-sweep"}, {"theorem", spec.theorem}, {"constants", constants_json(cfg)},
                  {"exponent_note", "2^(k + log d / log 2) evaluated as 2^k d"}, {"boxes", boxes}};
    // Calibrate the leading constant on the reference cell.
    std::vector<WegnerCell> ok;
    for (const auto& c : cells) {
        if (!c.failed) ok.push_back(c);
    }
    if (spec.reference_cell < cells.size() && !cells[spec.reference_cell].failed &&
        std::isfinite(cells[spec.reference_cell].theoretical_bound) &&
        cells[spec.reference_cell].theoretical_bound > 0.0 && cells[spec.reference_cell].estimate > 0.0) {
        const auto report = calibrate_bounds(cells, spec.reference_cell);
        ojson v = ojson::array();
        for (auto i : report.violations) v.push_back(i);
        summary["calibration"] = {{"reference_cell", report.reference},
                                  {"leading_constant", report.leading_constant},
                                  {"violations", v}};
    } else {
        summary["calibration"] = {{"reference_cell", spec.reference_cell},
                                  {"note", "reference cell has no positive estimate and bound"}};
    }
    if (spec.fit_axis) {
        try {
            const ScalingFit fit = scaling_fit(ok, *spec.fit_axis);
            ojson pts = ojson::array();
            for (const auto& [x, y] : fit.points) pts.push_back({x, y});
            summary["fit"] = {{"log_slope", fit.log_slope},
                              {"slope_ci", fit.slope_ci},
                              {"log_intercept", fit.log_intercept},
                              {"excluded_zero", fit.excluded_zero},
                              {"points", pts}};
        } catch (const Error& e) {
            summary["fit"] = {{"error", e.what()}};
        }
    }

    CsvTable csv(kWegnerHeader);
    for (const auto& c : cells) csv.row(wegner_row(c));
    ctx.write("wegner.csv", csv.text());
    ctx.write_json("wegner.json", summary);
}

// -------------------------------------------------------------- disorder-sweep

void run_disorder_sweep(Context& ctx, const DisorderSweepSpec& spec) {
    const auto& cfg = ctx.config;
    const AlloyModel model = cfg.model.build();
    ojson summary{{"kind", "disorder-sweep"}};
    double e0_inf = kInf;
    if (spec.window.needs_threshold()) {
        const ThresholdCurve curve = e0_curve(model, spec.t_grid, ctx.threads);
        e0_inf = curve.e0_infinity_estimate;
        summary["e0_infinity"] = curve_summary(curve);
    }
    const SpectralWindow window = spec.window.resolve(e0_inf);
    summary["window"] = {{"lower", number(window.lower)}, {"upper", number(window.upper)}};

    const auto cells = disorder_sweep(model, window, spec.lambdas, ctx.sampling(spec.n_samples, spec.early_stop));
    CsvTable csv(kWegnerHeader);
    bool monotone = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        ctx.cell("lambda=" + fmt(c.lambda), !c.failed, c.failure);
        csv.row(wegner_row(c));
        if (i > 0 && c.estimate > cells[i - 1].estimate + c.ci_halfwidth + cells[i - 1].ci_halfwidth) {
            monotone = false;
        }
    }
    summary["nonincreasing_within_ci"] = monotone;
    if (!cells.empty() && cells.front().estimate > 0.0) {
        summary["final_over_initial"] = cells.back().estimate / cells.front().estimate;
    }
    bool above_eta = true;
    for (const auto& c : cells) above_eta = above_eta && c.estimate >= c.eta_bound;
    summary["estimates_at_least_eta_bound"] = above_eta;
    // Per-sample floor from the Dirichlet problem off the supports.
    if (!std::isfinite(window.lower)) {
        try {
            const auto floor_count = count_in_interval(model.complement_operator(), window);
            std::size_t below = 0;
            for (const auto& c : cells) {
                below += static_cast<std::size_t>(
                    std::count_if(c.counts.begin(), c.counts.end(), [&](std::size_t k) { return k < floor_count; }));
            }
            summary["complement_count"] = floor_count;
            summary["samples_below_complement_count"] = below;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::empty_domain) throw;
            summary["complement_count"] = "none: supports cover the box";
        }
    }
    if (model.centers().sites.size() <= 6 && !std::isfinite(window.lower)) {
        ojson corners = ojson::array();
        for (const auto& c : cells) corners.push_back(corner_minimum_count(model, window, c.lambda));
        summary["corner_minimum"] = corners;
    }
    ctx.write("disorder_sweep.csv", csv.text());
    ctx.write_json("disorder_sweep.json", summary);
}

// ------------------------------------------------------------------ thresholds

void run_thresholds(Context& ctx, const ThresholdsSpec& spec) {
    const auto& cfg = ctx.config;
    const AlloyModel model = cfg.model.build();
    const GridSpec& grid = model.grid();
    const FieldNorms norms = field_norms(model.background(), grid);
    const auto& prof = model.disorder().profile;
    const double delta = spec.delta.value_or(prof.inner_radius);

    const ThresholdCurve curve = e0_curve(model, spec.t_grid, ctx.threads);
    ctx.cell("e0_curve");
    const auto sup = e0_infinity_lower_bound(curve.t_values, prof.floor, prof.inner_radius, norms.norm_V0,
                                             norms.norm_b, norms.norm_c, cfg.ucp);

    ojson j;
    j["kind"] = "thresholds";
    j["constants"] = constants_json(cfg);
    j["norms"] = norms_json(norms);
    j["gamma1"] = gamma1(prof.inner_radius, spec.E0, norms, cfg.ucp);
    j["gamma2"] = gamma2(prof.inner_radius, spec.E0, norms, spec.lambda, model.support_max(), prof.outer_side,
                         grid.dim(), cfg.ucp);
    j["csfuc"] = csfuc(delta, norms.norm_V0, norms.norm_b, norms.norm_c, cfg.ucp);

    const double E1 = spec.E1_factor * curve.e0_infinity_estimate;
    double k0 = std::numeric_limits<double>::quiet_NaN();
    try {
        k0 = kappa0(curve, E1);
        j["kappa0"] = {{"E1", E1}, {"value", k0}};
    } catch (const Error& e) {
        j["kappa0"] = {{"E1", number(E1)}, {"error", e.what()}};
    }

    CsvTable csv({"t", "e0", "lower_bound"});
    ojson pts = ojson::array();
    for (std::size_t i = 0; i < curve.t_values.size(); ++i) {
        const double lb = e0_lower_bound(curve.t_values[i], prof.floor, prof.inner_radius, norms.norm_V0,
                                         norms.norm_b, norms.norm_c, cfg.ucp);
        csv.row({fmt(curve.t_values[i]), fmt(curve.e0_values[i]), fmt(lb)});
        pts.push_back({{"t", curve.t_values[i]}, {"e0", curve.e0_values[i]}, {"lower_bound", lb}});
    }
    j["e0_curve"] = pts;
    ojson inf = curve_summary(curve);
    inf["lower_bound_sup"] = {{"t", sup.t}, {"value", sup.value}};
    j["e0_infinity"] = inf;

    if (spec.uncertainty) {
        CsvTable ucsv({"sample", "rank", "compressed_bottom", "kappa0", "margin"});
        ojson u{{"lambda", spec.uncertainty->lambda}, {"n_samples", spec.uncertainty->n_samples}};
        if (std::isnan(k0)) {
            u["error"] = "kappa0 unavailable";
        } else {
            const std::size_t n = spec.uncertainty->n_samples;
            std::vector<double> bottoms(n, kInf);
            std::vector<std::size_t> ranks(n, 0);
            const auto errors = parallel_for_index(n, ctx.threads, [&](std::size_t s) {
                const auto op = model.sample_operator(spec.uncertainty->lambda, ctx.master_seed, s);
                const auto pairs = eigenpairs_in_window(op, SpectralWindow::up_to(E1));
                ranks[s] = pairs.eigenvalues.size();
                if (ranks[s] == 0) return;
                // Eigenvectors have unit l2 norm; rescale to unit h^d-weighted norm.
                const Eigen::MatrixXcd basis = pairs.eigenvectors / std::sqrt(grid.cell_volume());
                bottoms[s] = compressed_operator_bottom(basis, op.restrict_to_domain(model.u_envelope()),
                                                        grid.cell_volume());
            });
            std::size_t violations = 0;
            double worst = kInf;
            for (std::size_t s = 0; s < n; ++s) {
                if (errors[s]) {
                    try {
                        std::rethrow_exception(errors[s]);
                    } catch (const std::exception& e) {
                        ctx.cell("uncertainty sample " + std::to_string(s), false, e.what());
                    }
                    continue;
                }
                const double margin = bottoms[s] - k0;
                if (ranks[s] > 0) {
                    worst = std::min(worst, margin);
                    if (margin < -1e-8) ++violations;
                }
                ucsv.row({fmt(std::size_t{s}), fmt(ranks[s]), fmt(bottoms[s]), fmt(k0), fmt(margin)});
            }
            u["violations"] = violations;
            u["worst_margin"] = number(worst);
            ctx.write("uncertainty.csv", ucsv.text());
        }
        j["uncertainty"] = u;
    }
    ctx.write("e0_curve.csv", csv.text());
    ctx.write_json("thresholds.json", j);
}

// ------------------------------------------------------------------------- ids

void run_ids(Context& ctx, const IdsSpec& spec) {
    const auto& cfg = ctx.config;
    const AlloyModel model = cfg.model.build();
    const IDSCurve curve = ids_estimate(model, spec.energies, spec.lambda, ctx.sampling(spec.n_samples));
    ctx.cell("ids lambda=" + fmt(spec.lambda));
    CsvTable csv({"energy", "value", "ci"});
    for (std::size_t i = 0; i < curve.energies.size(); ++i) {
        csv.row({fmt(curve.energies[i]), fmt(curve.values[i]), fmt(curve.ci[i])});
    }
    ojson j{{"kind", "ids"}, {"lambda", spec.lambda}, {"box_side", curve.box_side}, {"n_samples", curve.n_samples}};
    ctx.write("ids.csv", csv.text());

    if (spec.dichotomy) {
        const ThresholdCurve tc = e0_curve(model, spec.t_grid, ctx.threads);
        j["e0_infinity"] = curve_summary(tc);
        std::vector<double> probes;
        for (double f : spec.dichotomy->probe_factors) probes.push_back(f * tc.e0_infinity_estimate);
        std::sort(probes.begin(), probes.end());
        const auto report = ids_dichotomy(model, probes, spec.dichotomy->lambdas, ctx.sampling(spec.n_samples),
                                          tc.e0_infinity_estimate);
        CsvTable dcsv({"probe_energy", "lambda", "value", "ci", "complement_density"});
        ojson verdicts = ojson::array();
        for (const auto& p : report.probes) {
            for (std::size_t i = 0; i < p.values.size(); ++i) {
                dcsv.row({fmt(p.energy), fmt(report.lambdas[i]), fmt(p.values[i]), fmt(p.ci[i]),
                          fmt(p.complement_density)});
            }
            ojson v{{"energy", number(p.energy)},
                    {"verdict", std::string(to_string(p.verdict))},
                    {"complement_density", p.complement_density},
                    {"per_sample_violations", p.per_sample_violations}};
            if (!p.note.empty()) v["note"] = p.note;
            verdicts.push_back(v);
            ctx.cell("probe E=" + fmt(p.energy));
        }
        j["dichotomy"] = verdicts;
        ctx.write("dichotomy.csv", dcsv.text());
    }
    ctx.write_json("ids.json", j);
}

// ----------------------------------------------------------------- interlacing

void run_interlacing(Context& ctx, const InterlacingSpec& spec) {
    const AlloyModel model = ctx.config.model.build();
    const auto report = interlacing_check(model, spec.lambda, spec.k_max, ctx.sampling(spec.n_samples), spec.t_values);
    ctx.cell("interlacing", report.violations == 0,
             report.violations == 0 ? "" : std::to_string(report.violations) + " violations");
    CsvTable csv({"t", "k", "mu_t", "mu_complement"});
    for (std::size_t i = 0; i < report.t_values.size(); ++i) {
        for (std::size_t k = 0; k < report.k_max; ++k) {
            csv.row({fmt(report.t_values[i]), fmt(k + 1), fmt(report.coupled_eigenvalues[i][k]),
                     fmt(report.complement_eigenvalues[k])});
        }
    }
    ojson j{{"kind", "interlacing"},
            {"samples", report.samples},
            {"k_max", report.k_max},
            {"instances", report.instances},
            {"violations", report.violations},
            {"worst_margin", number(report.worst_margin)},
            {"t_monotone", report.t_monotone},
            {"final_relative_gap", report.final_relative_gap}};
    ctx.write("interlacing.csv", csv.text());
    ctx.write_json("interlacing.json", j);
}

// ------------------------------------------------------------------ phase-scan

void run_phase_scan(Context& ctx, const PhaseScanSpec& spec) {
    const AlloyModel model = ctx.config.model.build();
    const ThresholdCurve curve = e0_curve(model, spec.t_grid, ctx.threads);
    std::vector<double> energies = spec.energies;
    for (double f : spec.energy_factors) energies.push_back(f * curve.e0_infinity_estimate);
    std::sort(energies.begin(), energies.end());

    CsvTable csv({"lambda", "energy", "estimate", "ci", "n_samples", "eta_bound", "seed_base"});
    for (const double lambda : spec.lambdas) {
        const HermitianOperator eta = model.eta_operator(lambda);
        for (const double e : energies) {
            const SpectralWindow window = SpectralWindow::up_to(e);
            const WegnerCell c = estimate_expected_trace(model, window, lambda, ctx.sampling(spec.n_samples));
            const double eta_count = static_cast<double>(count_in_interval(eta, window));
            ctx.cell("lambda=" + fmt(lambda) + " E=" + fmt(e), !c.failed, c.failure);
            csv.row({fmt(lambda), fmt(e), fmt(c.failed ? std::nan("") : c.estimate),
                     fmt(c.failed ? std::nan("") : c.ci_halfwidth), fmt(c.n_samples), fmt(eta_count),
                     fmt(c.seed_base, 0)});
        }
    }
    ojson j{{"kind", "phase-scan"}, {"e0_infinity", curve_summary(curve)}};
    ctx.write("phase_scan.csv", csv.text());
    ctx.write_json("phase_scan.json", j);
}

// -------------------------------------------------------------------- ucp-mass

void run_ucp_mass(Context& ctx, const UcpMassSpec& spec) {
    const auto& cfg = ctx.config;
    const AlloyModel model = cfg.model.build();
    const GridSpec& grid = model.grid();
    const SpectralWindow window = spec.window.resolve(kInf);
    const double E0 = spec.E0.value_or(window.upper);
    if (window.upper > E0) throw Error(ErrorKind::precondition, "window must lie below E0");
    FieldNorms norms = field_norms(model.background(), grid);
    const double u_sup = *std::max_element(model.u_envelope().begin(), model.u_envelope().end());
    norms.norm_c += spec.lambda * model.support_max() * u_sup;
    const double delta = spec.delta.value_or(model.disorder().profile.inner_radius);
    const double gamma = ucp_gamma(delta, E0, norms, cfg.ucp);
    if (window.width() > 2.0 * gamma) {
        throw Error(ErrorKind::precondition, "window width " + fmt(window.width()) + " exceeds 2 gamma = " +
                                                 fmt(2.0 * gamma));
    }

    std::vector<std::vector<std::pair<double, double>>> found(spec.n_samples);
    parallel_for_index_or_throw(spec.n_samples, ctx.threads, [&](std::size_t s) {
        const auto op = model.sample_operator(spec.lambda, ctx.master_seed, s);
        const auto pairs = eigenpairs_in_window(op, window);
        const auto w = op.restrict_to_domain(model.w_indicator());
        for (std::size_t k = 0; k < pairs.eigenvalues.size(); ++k) {
            const Eigen::VectorXcd v = pairs.eigenvectors.col(static_cast<Eigen::Index>(k));
            found[s].emplace_back(pairs.eigenvalues[k], eigenfunction_mass({v.data(), static_cast<std::size_t>(v.size())}, w));
        }
    });
    CsvTable csv({"sample", "eigenvalue", "mass"});
    double min_mass = kInf;
    std::size_t total = 0;
    for (std::size_t s = 0; s < found.size(); ++s) {
        for (const auto& [e, m] : found[s]) {
            csv.row({fmt(s), fmt(e), fmt(m)});
            min_mass = std::min(min_mass, m);
            ++total;
        }
    }
    if (total == 0) throw Error(ErrorKind::empty_window, "no eigenvalue in the window for any sample");
    ctx.cell("ucp-mass", min_mass > 0.0, min_mass > 0.0 ? "" : "zero mass on the ball set");
    ojson j{{"kind", "ucp-mass"},
            {"constants", constants_json(cfg)},
            {"E0", E0},
            {"delta", delta},
            {"gamma", gamma},
            {"gamma_squared", gamma * gamma},
            {"eigenfunctions", total},
            {"min_mass", min_mass},
            {"ratio_to_gamma_squared", min_mass / (gamma * gamma)}};
    ctx.write("ucp_mass.csv", csv.text());
    ctx.write_json("ucp_mass.json", j);
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    RunManifest manifest;
    manifest.kind = experiment_kind(config.experiment);
    manifest.config_sha256 = sha256_hex(config.source_text);
    manifest.version = library_version();
    manifest.started = utc_timestamp();
    manifest.threads = std::max(1u, options.threads);
    manifest.structure_seed = config.seeds.structure_seed;
    manifest.master_seed = options.seed_override.value_or(config.seeds.master_seed);

    const std::filesystem::path out = options.output_directory.value_or(config.output_directory);
    if (out.empty()) throw Error(ErrorKind::config_invalid, "output.directory: missing (or pass --out)");
    Context ctx{config, manifest, out, manifest.threads, manifest.master_seed};

    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, WegnerSweepSpec>) run_wegner_sweep(ctx, spec);
            if constexpr (std::is_same_v<T, DisorderSweepSpec>) run_disorder_sweep(ctx, spec);
            if constexpr (std::is_same_v<T, ThresholdsSpec>) run_thresholds(ctx, spec);
            if constexpr (std::is_same_v<T, IdsSpec>) run_ids(ctx, spec);
            if constexpr (std::is_same_v<T, InterlacingSpec>) run_interlacing(ctx, spec);
            if constexpr (std::is_same_v<T, PhaseScanSpec>) run_phase_scan(ctx, spec);
            if constexpr (std::is_same_v<T, UcpMassSpec>) run_ucp_mass(ctx, spec);
        },
        config.experiment);

    manifest.finished = utc_timestamp();
    write_output(out, "manifest.json", manifest.to_json());
    return manifest;
}

int exit_status(const RunManifest& manifest) noexcept { return manifest.all_ok() ? 0 : 3; }

}  // namespace alloylab
