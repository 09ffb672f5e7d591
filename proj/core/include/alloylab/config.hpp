#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alloylab/grid.hpp"
#include "alloylab/hamiltonian.hpp"
#include "alloylab/model.hpp"
#include "alloylab/thresholds.hpp"
#include "alloylab/wegner.hpp"

namespace alloylab {

/// A field component: an expression in x1..x3 or a CSV table on the grid.
struct FieldSpec {
    std::string expression = "0";
    std::filesystem::path csv;
};

struct ModelConfig {
    int dim = 1;
    double side_length = 1.0;
    int points_per_side = 2;
    std::vector<FieldSpec> vector_potential;
    FieldSpec scalar_potential;
    bool normalize = true;
    std::string preset;
    DisorderSpec disorder;

    GridSpec grid() const;
    /// Same spacing, different box side: n = round(L / h) - 1.
    GridSpec grid_with_side(double side_length) const;
    FieldDescription fields(const GridSpec& grid) const;
    AlloyModel build() const;
    AlloyModel build(const GridSpec& grid) const;
};

/// Energy window; a bound may be given absolutely or as a multiple of the
/// E0(infinity) estimate. A missing lower bound means -infinity.
struct WindowSpec {
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> lower_factor;
    std::optional<double> upper_factor;

    bool needs_threshold() const noexcept { return lower_factor.has_value() || upper_factor.has_value(); }
    SpectralWindow resolve(double e0_infinity) const;
};

struct WegnerSweepSpec {
    std::vector<double> lambdas;
    std::vector<WindowSpec> windows;
    std::vector<double> box_sides;  // empty: the model box only
    std::size_t n_samples = 200;
    bool early_stop = false;
    std::optional<ScalingAxis> fit_axis;
    int theorem = 1;
    std::size_t reference_cell = 0;
    std::vector<double> t_grid;
};

struct DisorderSweepSpec {
    std::vector<double> lambdas;
    WindowSpec window;
    std::size_t n_samples = 200;
    bool early_stop = false;
    std::vector<double> t_grid;
};

struct UncertaintySpec {
    double lambda = 1.0;
    std::size_t n_samples = 10;
};

struct ThresholdsSpec {
    std::vector<double> t_grid;
    double E0 = 1.0;
    std::optional<double> delta;
    double lambda = 1.0;
    double E1_factor = 0.5;
    std::optional<UncertaintySpec> uncertainty;
};

struct DichotomySpec {
    std::vector<double> probe_factors;
    std::vector<double> lambdas;
};

struct IdsSpec {
    std::vector<double> energies;
    double lambda = 1.0;
    std::size_t n_samples = 50;
    std::optional<DichotomySpec> dichotomy;
    std::vector<double> t_grid;
};

struct InterlacingSpec {
    double lambda = 1.0;
    std::size_t k_max = 10;
    std::size_t n_samples = 20;
    std::vector<double> t_values{10.0, 1e3, 1e6};
};

struct PhaseScanSpec {
    std::vector<double> lambdas;
    std::vector<double> energies;
    std::vector<double> energy_factors;
    std::size_t n_samples = 50;
    std::vector<double> t_grid;
};

struct UcpMassSpec {
    WindowSpec window;
    double lambda = 0.0;
    std::size_t n_samples = 1;
    std::optional<double> E0;
    std::optional<double> delta;
};

using ExperimentSpec = std::variant<WegnerSweepSpec, DisorderSweepSpec, ThresholdsSpec, IdsSpec, InterlacingSpec,
                                    PhaseScanSpec, UcpMassSpec>;

std::string experiment_kind(const ExperimentSpec& spec);

struct Seeds {
    std::uint64_t structure_seed = 0;
    std::uint64_t master_seed = 0;
};

struct ExperimentConfig {
    ModelConfig model;
    UCPConstants ucp;
    LeadingConstants leading;
    ExperimentSpec experiment;
    Seeds seeds;
    std::filesystem::path output_directory;
    /// Exact bytes of the parsed file, hashed into the manifest.
    std::string source_text;
};

/// Strict parse: unknown keys, wrong types and missing seeds raise
/// config_invalid naming the offending path (e.g. "model.grid.dim").
/// Relative CSV paths resolve against `base_directory`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_directory = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct Preset {
    std::string name;
    std::string description;
    DisorderSpec disorder;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

}  // namespace alloylab
