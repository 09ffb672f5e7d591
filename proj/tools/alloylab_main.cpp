// Command-line runner: alloylab run|validate|list-presets.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alloylab/config.hpp"
#include "alloylab/error.hpp"
#include "alloylab/experiment.hpp"

namespace {

constexpr int kConfigInvalid = 2;
constexpr int kSolverFailure = 4;

int report(const alloylab::Error& e) {
    std::cerr << "alloylab: " << e.what() << "\n";
    switch (e.kind()) {
    case alloylab::ErrorKind::config_invalid:
    case alloylab::ErrorKind::io:
        return kConfigInvalid;
    default:
        return kSolverFailure;
    }
}

void print_presets() {
    for (const auto& p : alloylab::presets()) {
        const auto& d = p.disorder;
        const char* shape = d.profile.shape == alloylab::ProfileShape::tent             ? "tent"
                            : d.profile.shape == alloylab::ProfileShape::indicator_cube ? "indicator-cube"
                                                                                        : "indicator-ball";
        std::printf("%-9s %s\n          shape=%s delta_minus=%g delta_plus=%g u_minus=%g placement=%s\n",
                    p.name.c_str(), p.description.c_str(), shape, d.profile.inner_radius, d.profile.outer_side,
                    d.profile.floor, d.placement == alloylab::PlacementMode::crooked ? "crooked" : "periodic");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alloylab: magnetic alloy-type random Schroedinger operators at desk scale"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed_override;

    auto* run = app.add_subcommand("run", "run an experiment and write its outputs");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (overrides output.directory)");
    run->add_option("--threads", threads, "worker threads; results do not depend on it")->check(CLI::Range(1u, 1024u));
    run->add_option("--seed-override", seed_override, "replace seeds.master_seed");

    auto* validate = app.add_subcommand("validate", "parse and check a config without running it");
    validate->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);

    app.add_subcommand("list-presets", "print the disorder presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigInvalid;
    }

    try {
        if (app.got_subcommand("list-presets")) {
            print_presets();
            return 0;
        }
        const auto config = alloylab::load_config(config_path);
        if (app.got_subcommand("validate")) {
            std::cout << config_path << ": ok (" << alloylab::experiment_kind(config.experiment) << ")\n";
            return 0;
        }
        alloylab::RunOptions options;
        if (!out_dir.empty()) options.output_directory = out_dir;
        options.threads = threads;
        options.seed_override = seed_override;
        const auto manifest = alloylab::run_experiment(config, options);
        for (const auto& f : manifest.files) std::cout << f.sha256 << "  " << f.path << "\n";
        for (const auto& c : manifest.cells) {
            if (!c.ok) std::cerr << "failed cell " << c.id << ": " << c.message << "\n";
        }
        return alloylab::exit_status(manifest);
    } catch (const alloylab::Error& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << "alloylab: " << e.what() << "\n";
        return kSolverFailure;
    }
}
