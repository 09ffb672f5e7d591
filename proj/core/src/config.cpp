#include "alloylab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "alloylab/error.hpp"
#include "alloylab/field_expr.hpp"

namespace alloylab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::config_invalid, path + ": " + what);
}

/// Object view that remembers which keys were read so leftovers can be
/// reported as unknown.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) invalid(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key) && !node_.at(key).is_null();
    }

    const json& raw(const std::string& key) {
        if (!has(key)) invalid(at(key), "missing");
        return node_.at(key);
    }

    Reader object(const std::string& key) { return Reader(raw(key), at(key)); }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) invalid(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) invalid(at(key), "expected a finite number");
        return d;
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    std::uint64_t unsigned_integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            invalid(at(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        const auto v = unsigned_integer(key);
        if (v == 0) invalid(at(key), "must be >= 1");
        return static_cast<std::size_t>(v);
    }

    int integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) invalid(at(key), "expected an integer");
        return v.get<int>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) invalid(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) invalid(at(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) invalid(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                invalid(at(key) + "[" + std::to_string(i) + "]", "expected a finite number");
            }
            out.push_back(v[i].get<double>());
        }
        if (out.empty()) invalid(at(key), "must not be empty");
        return out;
    }

    /// Array of numbers or {"from", "to", "count"} (log-spaced).
    std::vector<double> grid(const std::string& key) {
        const json& v = raw(key);
        if (v.is_array()) return numbers(key);
        Reader r(v, at(key));
        const double lo = r.number("from");
        const double hi = r.number("to");
        const auto n = r.count("count", 2);
        r.finish();
        if (!(lo > 0.0 && hi > lo) || n < 2) invalid(at(key), "log grid needs 0 < from < to and count >= 2");
        return log_grid(lo, hi, n);
    }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) invalid(at(key), "unknown key");
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require_increasing(const std::vector<double>& xs, const std::string& path, bool positive) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (positive && !(xs[i] > 0.0)) invalid(path, "values must be positive");
        if (i > 0 && !(xs[i] > xs[i - 1])) invalid(path, "values must be strictly increasing");
    }
}

FieldSpec read_field(const json& v, const std::string& path, const std::filesystem::path& base) {
    FieldSpec f;
    if (v.is_number()) {
        f.expression = json(v.get<double>()).dump();
    } else if (v.is_string()) {
        f.expression = v.get<std::string>();
    } else if (v.is_object()) {
        Reader r(v, path);
        std::filesystem::path p = r.string("csv");
        r.finish();
        f.csv = p.is_absolute() ? p : base / p;
        return f;
    } else {
        invalid(path, "expected an expression, a number or {\"csv\": path}");
    }
    try {
        (void)FieldExpression::parse(f.expression);
    } catch (const Error& e) {
        invalid(path, e.what());
    }
    return f;
}

ProfileShape parse_shape(const std::string& s, const std::string& path) {
    if (s == "indicator-ball") return ProfileShape::indicator_ball;
    if (s == "indicator-cube") return ProfileShape::indicator_cube;
    if (s == "tent") return ProfileShape::tent;
    invalid(path, "unknown shape '" + s + "' (indicator-ball, indicator-cube, tent)");
}

DistributionKind parse_distribution(const std::string& s, const std::string& path) {
    if (s == "uniform") return DistributionKind::uniform;
    if (s == "tent") return DistributionKind::tent;
    invalid(path, "unknown distribution '" + s + "' (uniform, tent)");
}

CouplingDistribution read_distribution(Reader& r, const CouplingDistribution& fallback) {
    CouplingDistribution d = fallback;
    if (r.has("kind")) d.kind = parse_distribution(r.string("kind"), r.at("kind"));
    d.support_max = r.number("support_max", d.support_max);
    if (!(d.support_max > 0.0)) invalid(r.at("support_max"), "must be positive");
    return d;
}

DisorderSpec read_disorder(Reader r, int dim, std::string& preset_name) {
    DisorderSpec d;
    if (r.has("preset")) {
        preset_name = r.string("preset");
        try {
            d = find_preset(preset_name).disorder;
        } catch (const Error&) {
            invalid(r.at("preset"), "unknown preset '" + preset_name + "'");
        }
    }
    if (r.has("shape")) d.profile.shape = parse_shape(r.string("shape"), r.at("shape"));
    d.profile.inner_radius = r.number("delta_minus", d.profile.inner_radius);
    d.profile.outer_side = r.number("delta_plus", d.profile.outer_side);
    d.profile.floor = r.number("u_minus", d.profile.floor);
    if (r.has("placement")) {
        const std::string p = r.string("placement");
        if (p == "periodic") {
            d.placement = PlacementMode::periodic;
        } else if (p == "crooked") {
            d.placement = PlacementMode::crooked;
        } else {
            invalid(r.at("placement"), "expected periodic or crooked");
        }
    }
    if (r.has("distribution")) {
        Reader dr = r.object("distribution");
        d.coupling.base = read_distribution(dr, d.coupling.base);
        dr.finish();
    }
    if (r.has("per_site")) {
        const json& list = r.raw("per_site");
        if (!list.is_array()) invalid(r.at("per_site"), "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = r.at("per_site") + "[" + std::to_string(i) + "]";
            Reader sr(list[i], path);
            const json& site = sr.raw("site");
            if (!site.is_array() || site.size() != static_cast<std::size_t>(dim)) {
                invalid(sr.at("site"), "expected " + std::to_string(dim) + " integer coordinates");
            }
            Coords c{0, 0, 0};
            for (int k = 0; k < dim; ++k) {
                if (!site[static_cast<std::size_t>(k)].is_number_integer()) invalid(sr.at("site"), "expected integers");
                c[static_cast<std::size_t>(k)] = site[static_cast<std::size_t>(k)].get<int>();
            }
            d.coupling.per_site[c] = read_distribution(sr, d.coupling.base);
            sr.finish();
        }
    }
    r.finish();
    try {
        d.profile.validate();
    } catch (const Error& e) {
        invalid(r.at("delta_minus"), e.what());
    }
    return d;
}

ModelConfig read_model(Reader r, const std::filesystem::path& base) {
    ModelConfig m;
    {
        Reader g = r.object("grid");
        m.dim = g.integer("dim");
        m.side_length = g.number("side_length");
        m.points_per_side = g.integer("points_per_side");
        g.finish();
        try {
            (void)build_grid(m.dim, m.side_length, m.points_per_side);
        } catch (const Error& e) {
            invalid(g.at("dim"), e.what());
        }
    }
    if (r.has("fields")) {
        Reader f = r.object("fields");
        if (f.has("vector_potential")) {
            const json& a = f.raw("vector_potential");
            if (!a.is_array() || a.size() > static_cast<std::size_t>(m.dim)) {
                invalid(f.at("vector_potential"), "expected at most " + std::to_string(m.dim) + " components");
            }
            for (std::size_t k = 0; k < a.size(); ++k) {
                m.vector_potential.push_back(
                    read_field(a[k], f.at("vector_potential") + "[" + std::to_string(k) + "]", base));
            }
        }
        if (f.has("scalar_potential")) {
            m.scalar_potential = read_field(f.raw("scalar_potential"), f.at("scalar_potential"), base);
        }
        m.normalize = f.boolean("normalize", true);
        f.finish();
    }
    m.disorder = read_disorder(r.object("disorder"), m.dim, m.preset);
    r.finish();
    return m;
}

WindowSpec read_window(Reader r) {
    WindowSpec w;
    w.lower = r.optional_number("lower");
    w.upper = r.optional_number("upper");
    w.lower_factor = r.optional_number("lower_factor");
    w.upper_factor = r.optional_number("upper_factor");
    r.finish();
    if (w.upper.has_value() == w.upper_factor.has_value()) {
        invalid(r.at("upper"), "give exactly one of upper, upper_factor");
    }
    if (w.lower && w.lower_factor) invalid(r.at("lower"), "give at most one of lower, lower_factor");
    if (w.lower && w.upper && *w.lower > *w.upper) invalid(r.at("lower"), "lower exceeds upper");
    return w;
}

std::vector<double> read_lambdas(Reader& r, const std::string& key) {
    auto l = r.numbers(key);
    for (double x : l) {
        if (x < 0.0) invalid(r.at(key), "lambda must be >= 0");
    }
    return l;
}

std::vector<double> read_t_grid(Reader& r) {
    if (!r.has("t_grid")) return default_t_grid();
    auto g = r.grid("t_grid");
    require_increasing(g, r.at("t_grid"), true);
    return g;
}

ExperimentSpec read_experiment(Reader r) {
    const std::string kind = r.string("kind");
    if (kind == "wegner-sweep") {
        WegnerSweepSpec s;
        s.lambdas = read_lambdas(r, "lambda");
        if (r.has("windows")) {
            const json& list = r.raw("windows");
            if (!list.is_array() || list.empty()) invalid(r.at("windows"), "expected a non-empty array");
            for (std::size_t i = 0; i < list.size(); ++i) {
                s.windows.push_back(read_window(Reader(list[i], r.at("windows") + "[" + std::to_string(i) + "]")));
            }
        }
        if (r.has("center")) {
            if (!s.windows.empty()) invalid(r.at("center"), "give either windows or center/widths");
            const double c = r.number("center");
            for (double w : r.numbers("widths")) {
                if (!(w > 0.0)) invalid(r.at("widths"), "widths must be positive");
                WindowSpec ws;
                ws.lower = c - 0.5 * w;
                ws.upper = c + 0.5 * w;
                s.windows.push_back(ws);
            }
        }
        if (s.windows.empty()) invalid(r.at("windows"), "missing (or center/widths)");
        if (r.has("box_sides")) {
            s.box_sides = r.numbers("box_sides");
            require_increasing(s.box_sides, r.at("box_sides"), true);
        }
        s.n_samples = r.count("n_samples", s.n_samples);
        s.early_stop = r.boolean("early_stop", false);
        if (r.has("fit_axis")) {
            const std::string a = r.string("fit_axis");
            if (a == "interval-width") {
                s.fit_axis = ScalingAxis::interval_width;
            } else if (a == "volume") {
                s.fit_axis = ScalingAxis::volume;
            } else if (a == "disorder") {
                s.fit_axis = ScalingAxis::disorder;
            } else {
                invalid(r.at("fit_axis"), "expected interval-width, volume or disorder");
            }
        }
        if (r.has("theorem")) {
            s.theorem = r.integer("theorem");
            if (s.theorem < 1 || s.theorem > 3) invalid(r.at("theorem"), "expected 1, 2 or 3");
        }
        if (r.has("reference_cell")) s.reference_cell = static_cast<std::size_t>(r.unsigned_integer("reference_cell"));
        s.t_grid = read_t_grid(r);
        r.finish();
        return s;
    }
    if (kind == "disorder-sweep") {
        DisorderSweepSpec s;
        s.lambdas = read_lambdas(r, "lambda_grid");
        require_increasing(s.lambdas, r.at("lambda_grid"), true);
        s.window = read_window(r.object("window"));
        s.n_samples = r.count("n_samples", s.n_samples);
        s.early_stop = r.boolean("early_stop", false);
        s.t_grid = read_t_grid(r);
        r.finish();
        return s;
    }
    if (kind == "thresholds") {
        ThresholdsSpec s;
        s.t_grid = read_t_grid(r);
        s.E0 = r.number("E0", s.E0);
        if (!(s.E0 > 0.0)) invalid(r.at("E0"), "must be positive");
        s.delta = r.optional_number("delta");
        s.lambda = r.number("lambda", s.lambda);
        s.E1_factor = r.number("E1_factor", s.E1_factor);
        if (!(s.E1_factor > 0.0 && s.E1_factor < 1.0)) invalid(r.at("E1_factor"), "must lie in (0, 1)");
        if (r.has("uncertainty")) {
            Reader u = r.object("uncertainty");
            UncertaintySpec us;
            us.lambda = u.number("lambda", us.lambda);
            us.n_samples = u.count("n_samples", us.n_samples);
            u.finish();
            s.uncertainty = us;
        }
        r.finish();
        return s;
    }
    if (kind == "ids") {
        IdsSpec s;
        s.energies = r.numbers("energies");
        require_increasing(s.energies, r.at("energies"), false);
        s.lambda = r.number("lambda", s.lambda);
        s.n_samples = r.count("n_samples", s.n_samples);
        if (r.has("dichotomy")) {
            Reader d = r.object("dichotomy");
            DichotomySpec ds;
            ds.probe_factors = d.numbers("probe_factors");
            ds.lambdas = read_lambdas(d, "lambda_grid");
            require_increasing(ds.lambdas, d.at("lambda_grid"), true);
            d.finish();
            s.dichotomy = ds;
        }
        s.t_grid = read_t_grid(r);
        r.finish();
        return s;
    }
    if (kind == "interlacing") {
        InterlacingSpec s;
        s.lambda = r.number("lambda", s.lambda);
        s.k_max = r.count("k_max", s.k_max);
        s.n_samples = r.count("n_samples", s.n_samples);
        if (r.has("t_values")) {
            s.t_values = r.numbers("t_values");
            require_increasing(s.t_values, r.at("t_values"), true);
        }
        r.finish();
        return s;
    }
    if (kind == "phase-scan") {
        PhaseScanSpec s;
        s.lambdas = read_lambdas(r, "lambda_grid");
        require_increasing(s.lambdas, r.at("lambda_grid"), true);
        if (r.has("energy_grid")) s.energies = r.numbers("energy_grid");
        if (r.has("energy_factors")) s.energy_factors = r.numbers("energy_factors");
        if (s.energies.empty() == s.energy_factors.empty()) {
            invalid(r.at("energy_grid"), "give exactly one of energy_grid, energy_factors");
        }
        s.n_samples = r.count("n_samples", s.n_samples);
        s.t_grid = read_t_grid(r);
        r.finish();
        return s;
    }
    if (kind == "ucp-mass") {
        UcpMassSpec s;
        s.window = read_window(r.object("window"));
        if (s.window.needs_threshold()) invalid(r.at("window"), "ucp-mass windows must be absolute");
        if (!s.window.lower) invalid(r.at("window.lower"), "missing");
        s.lambda = r.number("lambda", s.lambda);
        s.n_samples = r.count("n_samples", s.n_samples);
        s.E0 = r.optional_number("E0");
        s.delta = r.optional_number("delta");
        r.finish();
        return s;
    }
    invalid(r.at("kind"), "unknown experiment kind '" + kind + "'");
}

}  // namespace

GridSpec ModelConfig::grid() const { return build_grid(dim, side_length, points_per_side); }

GridSpec ModelConfig::grid_with_side(double side) const {
    const double h = grid().spacing();
    const auto n = static_cast<int>(std::lround(side / h)) - 1;
    return build_grid(dim, side, n);
}

FieldDescription ModelConfig::fields(const GridSpec& g) const {
    const auto source = [&](const FieldSpec& f) -> FieldSource {
        if (!f.csv.empty()) return load_tabulated_csv(f.csv.string(), g);
        const auto expr = FieldExpression::parse(f.expression);
        return ScalarFunction([expr](const Point& x) { return expr(x); });
    };
    FieldDescription d;
    for (const auto& f : vector_potential) d.vector_potential.push_back(source(f));
    d.scalar_potential = source(scalar_potential);
    return d;
}

AlloyModel ModelConfig::build() const { return build(grid()); }

AlloyModel ModelConfig::build(const GridSpec& g) const { return make_model(g, fields(g), disorder, normalize); }

SpectralWindow WindowSpec::resolve(double e0_infinity) const {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = 0.0;
    if (lower) lo = *lower;
    if (lower_factor) lo = *lower_factor * e0_infinity;
    hi = upper ? *upper : *upper_factor * e0_infinity;
    if (std::isnan(hi) || std::isnan(lo) || lo > hi) {
        throw Error(ErrorKind::precondition, "window does not resolve to lower <= upper");
    }
    return {lo, hi};
}

std::string experiment_kind(const ExperimentSpec& spec) {
    static const char* names[] = {"wegner-sweep", "disorder-sweep", "thresholds", "ids",
                                  "interlacing",  "phase-scan",     "ucp-mass"};
    return names[spec.index()];
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_directory) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::config_invalid, std::string("<root>: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.source_text = text;
    Reader r(root, "");
    cfg.model = read_model(r.object("model"), base_directory);
    cfg.model.disorder.structure_seed = 0;
    if (r.has("constants")) {
        Reader c = r.object("constants");
        cfg.ucp.N1 = c.number("N1", 1.0);
        cfg.ucp.N2 = c.number("N2", 1.0);
        cfg.leading.C1 = c.number("C1", 1.0);
        cfg.leading.C2 = c.number("C2", 1.0);
        cfg.leading.C3 = c.number("C3", 1.0);
        c.finish();
        if (!(cfg.ucp.N1 >= 1.0)) invalid(c.at("N1"), "must be >= 1");
        if (!(cfg.ucp.N2 >= 1.0)) invalid(c.at("N2"), "must be >= 1");
    }
    cfg.experiment = read_experiment(r.object("experiment"));
    {
        Reader s = r.object("seeds");
        cfg.seeds.structure_seed = s.unsigned_integer("structure_seed");
        cfg.seeds.master_seed = s.unsigned_integer("master_seed");
        s.finish();
    }
    cfg.model.disorder.structure_seed = cfg.seeds.structure_seed;
    if (r.has("output")) {
        Reader o = r.object("output");
        std::filesystem::path dir = o.string("directory");
        o.finish();
        cfg.output_directory = dir.is_absolute() || base_directory.empty() ? dir : base_directory / dir;
    }
    r.finish();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = [] {
        std::vector<Preset> p;
        {
            // Unit hats on a unit lattice: sum_j u_j = 1 in 1-D.
            DisorderSpec d;
            d.profile = {ProfileShape::tent, 0.25, 2.0, 0.5};
            d.placement = PlacementMode::periodic;
            p.push_back({"covering", "periodic tents of side 2, supports cover the box (E0(inf) = inf)", d});
        }
        {
            DisorderSpec d;
            d.profile = {ProfileShape::indicator_cube, 0.2, 0.4, 1.0};
            d.placement = PlacementMode::crooked;
            p.push_back({"gap", "crooked cubes of side 0.4, supports leave a complement", d});
        }
        {
            DisorderSpec d;
            d.profile = {ProfileShape::indicator_cube, 0.2, 0.45, 1.0};
            d.placement = PlacementMode::periodic;
            p.push_back({"ergodic", "periodic cubes of side 0.45 (z_j = j), identical couplings", d});
        }
        {
            DisorderSpec d;
            d.profile = {ProfileShape::tent, 0.1, 0.6, 0.5};
            d.placement = PlacementMode::crooked;
            p.push_back({"crooked", "crooked tents of side 0.6", d});
        }
        return p;
    }();
    return all;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw Error(ErrorKind::invalid_argument, "unknown preset '" + name + "'");
}

}  // namespace alloylab
