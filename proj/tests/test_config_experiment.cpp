#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "alloylab/config.hpp"
#include "alloylab/error.hpp"
#include "alloylab/experiment.hpp"
#include "alloylab/manifest.hpp"

using namespace alloylab;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "model": {
    "grid": {"dim": 1, "side_length": 8, "points_per_side": 31},
    "disorder": {"preset": "gap"}
  },
  "experiment": {"kind": "wegner-sweep", "lambda": [0], "windows": [{"upper": 5}], "n_samples": 3},
  "seeds": {"structure_seed": 1, "master_seed": 2}
})";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("alloylab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

ErrorKind parse_error(const std::string& text, std::string* message = nullptr) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.kind();
    }
    ADD_FAILURE() << "config parsed";
    return ErrorKind::invalid_argument;
}

}  // namespace

TEST(Config, ParsesMinimal) {
    const auto c = parse_config(kMinimal);
    EXPECT_EQ(experiment_kind(c.experiment), "wegner-sweep");
    EXPECT_EQ(c.model.grid().size(), 31u);
    EXPECT_EQ(c.model.preset, "gap");
    EXPECT_EQ(c.seeds.master_seed, 2u);
    EXPECT_EQ(c.source_text, kMinimal);
}

TEST(Config, UnknownKeyIsNamed) {
    std::string msg;
    EXPECT_EQ(parse_error(replace(kMinimal, "\"dim\": 1", "\"dim\": 1, \"dims\": 2"), &msg), ErrorKind::config_invalid);
    EXPECT_NE(msg.find("model.grid.dims"), std::string::npos) << msg;
}

TEST(Config, SeedsAreRequired) {
    std::string msg;
    const std::string text = replace(kMinimal, ",\n  \"seeds\": {\"structure_seed\": 1, \"master_seed\": 2}", "");
    EXPECT_EQ(parse_error(text, &msg), ErrorKind::config_invalid);
    EXPECT_NE(msg.find("seeds"), std::string::npos) << msg;
    EXPECT_EQ(parse_error(replace(kMinimal, "\"structure_seed\": 1, ", "")), ErrorKind::config_invalid);
}

TEST(Config, RejectsBadValues) {
    EXPECT_EQ(parse_error(replace(kMinimal, "\"preset\": \"gap\"", "\"preset\": \"nope\"")), ErrorKind::config_invalid);
    EXPECT_EQ(parse_error(replace(kMinimal, "\"dim\": 1", "\"dim\": 4")), ErrorKind::config_invalid);
    EXPECT_EQ(parse_error(replace(kMinimal, "\"kind\": \"wegner-sweep\"", "\"kind\": \"other\"")),
              ErrorKind::config_invalid);
    EXPECT_EQ(parse_error(replace(kMinimal, "\"dim\": 1", "\"dim\": \"one\"")), ErrorKind::config_invalid);
    EXPECT_EQ(parse_error("{not json"), ErrorKind::config_invalid);
}

TEST(Config, EmptyPhaseScanGridsAreInvalid) {
    const std::string scan = replace(
        kMinimal, R"("kind": "wegner-sweep", "lambda": [0], "windows": [{"upper": 5}], "n_samples": 3)",
        R"("kind": "phase-scan", "lambda_grid": [], "energy_grid": [1.0])");
    EXPECT_EQ(parse_error(scan), ErrorKind::config_invalid);
    const std::string no_energy = replace(
        kMinimal, R"("kind": "wegner-sweep", "lambda": [0], "windows": [{"upper": 5}], "n_samples": 3)",
        R"("kind": "phase-scan", "lambda_grid": [1.0], "energy_grid": [])");
    EXPECT_EQ(parse_error(no_energy), ErrorKind::config_invalid);
}

TEST(Config, PresetsAreDefined) {
    for (const char* name : {"covering", "gap", "ergodic", "crooked"}) {
        const auto& p = find_preset(name);
        EXPECT_NO_THROW(p.disorder.profile.validate()) << name;
    }
    EXPECT_THROW(find_preset("missing"), Error);
}

TEST(Run, MinimalWegnerWritesTwoFilesAndManifest) {
    auto config = parse_config(kMinimal);
    const auto dir = scratch("minimal");
    RunOptions opts;
    opts.output_directory = dir;
    const auto m = run_experiment(config, opts);
    EXPECT_TRUE(m.all_ok());
    EXPECT_EQ(exit_status(m), 0);
    ASSERT_EQ(m.files.size(), 2u);
    for (const auto& f : m.files) {
        EXPECT_EQ(sha256_file(dir / f.path), f.sha256);
        EXPECT_EQ(fs::file_size(dir / f.path), f.bytes);
    }
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    EXPECT_EQ(m.config_sha256, sha256_hex(kMinimal));
    ASSERT_EQ(m.cells.size(), 1u);

    const std::string csv = slurp(dir / "wegner.csv");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "lambda,box_side,window_lower,window_upper,estimate,ci,n_samples,eta_bound,theoretical_bound,seed_base");
}

TEST(Run, SameConfigTwiceGivesIdenticalDigests) {
    const auto config = parse_config(kMinimal);
    RunOptions a;
    a.output_directory = scratch("twice_a");
    RunOptions b;
    b.output_directory = scratch("twice_b");
    b.threads = 3;
    const auto ma = run_experiment(config, a);
    const auto mb = run_experiment(config, b);
    ASSERT_EQ(ma.files.size(), mb.files.size());
    for (std::size_t i = 0; i < ma.files.size(); ++i) {
        EXPECT_EQ(ma.files[i].path, mb.files[i].path);
        EXPECT_EQ(ma.files[i].sha256, mb.files[i].sha256);
    }
}

TEST(Run, SeedOverrideChangesSamples) {
    const std::string text = replace(kMinimal, "\"lambda\": [0]", "\"lambda\": [1]");
    const auto config = parse_config(replace(text, "{\"upper\": 5}", "{\"upper\": 40}"));
    RunOptions a;
    a.output_directory = scratch("seed_a");
    RunOptions b = a;
    b.output_directory = scratch("seed_b");
    b.seed_override = 99;
    const auto ma = run_experiment(config, a);
    const auto mb = run_experiment(config, b);
    EXPECT_EQ(mb.master_seed, 99u);
    EXPECT_EQ(ma.master_seed, 2u);
}

TEST(Run, FormatsNumbersWith17Digits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

#ifdef ALLOYLAB_CLI
TEST(Cli, ExitCodes) {
    const auto dir = scratch("cli");
    const auto good = dir / "good.json";
    const auto bad = dir / "bad.json";
    std::ofstream(good) << kMinimal;
    std::ofstream(bad) << replace(kMinimal, "\"dim\": 1", "\"dim\": 1, \"typo\": 0");
    const std::string cli = ALLOYLAB_CLI;
    const auto run = [&](const std::string& args) {
        const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    EXPECT_EQ(run("validate --config " + good.string()), 0);
    EXPECT_EQ(run("validate --config " + bad.string()), 2);
    EXPECT_EQ(run("run --config " + good.string() + " --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
    EXPECT_EQ(run("list-presets"), 0);
    EXPECT_EQ(run("frobnicate"), 2);
}
#endif
