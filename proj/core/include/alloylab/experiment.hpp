#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "alloylab/config.hpp"
#include "alloylab/manifest.hpp"

namespace alloylab {

struct RunOptions {
    /// Overrides output.directory from the config.
    std::optional<std::filesystem::path> output_directory;
    /// Worker count; numeric output does not depend on it.
    unsigned threads = 1;
    /// Replaces seeds.master_seed.
    std::optional<std::uint64_t> seed_override;
};

/// Runs the configured experiment, writes its CSV/JSON outputs and
/// manifest.json, and returns the manifest. Cell-level solver failures are
/// recorded in the manifest; configuration and I/O problems throw.
RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// CLI exit status: 0 success, 3 partial failure.
int exit_status(const RunManifest& manifest) noexcept;

}  // namespace alloylab
