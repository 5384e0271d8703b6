// Experiment driver: run | converge-space | converge-time | kernels-dump.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dtbc/config.hpp"
#include "dtbc/experiments.hpp"

namespace {

constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

const char* const override_keys[] = {"g_kind",      "half_width",     "t_final",      "n_steps",
                                     "n_modes",     "c_radius",       "snapshot_times", "seed",
                                     "error_norm",  "space_sweep",    "reference_modes", "time_sweep",
                                     "reference_steps"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Airy-type equation with discrete transparent boundary conditions"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string output_dir;
    std::string experiment;
    std::map<std::string, std::optional<std::string>> overrides;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--output-dir,--output_dir", output_dir, "directory for CSV and manifest files");
    app.add_option("--experiment", experiment,
                   "airy_g0 | const_g | variable_g | kernels_dump | converge_space | converge_time");
    for (const char* key : override_keys) {
        auto& slot = overrides[key];
        app.add_option_function<std::string>(std::string("--") + key, [&slot](const std::string& v) { slot = v; },
                                             std::string("override ") + key);
    }

    auto* run = app.add_subcommand("run", "time-step one experiment and write snapshots");
    auto* space = app.add_subcommand("converge-space", "spatial convergence sweep");
    auto* time = app.add_subcommand("converge-time", "temporal convergence sweep");
    auto* kernels = app.add_subcommand("kernels-dump", "write the boundary kernel taps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    dtbc::Experiment fallback = dtbc::Experiment::AiryG0;
    if (space->parsed()) fallback = dtbc::Experiment::ConvergeSpace;
    if (time->parsed()) fallback = dtbc::Experiment::ConvergeTime;
    if (kernels->parsed()) fallback = dtbc::Experiment::KernelsDump;

    dtbc::RunConfig config;
    try {
        dtbc::Settings settings;
        if (!config_path.empty()) settings = dtbc::load_settings(config_path);
        if (!experiment.empty()) settings.emplace_back("experiment", experiment);
        if (!output_dir.empty()) settings.emplace_back("output_dir", output_dir);
        for (const char* key : override_keys) {
            if (overrides[key]) settings.emplace_back(key, *overrides[key]);
        }
        config = dtbc::make_config(fallback, settings);
    } catch (const dtbc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    }
    for (const auto& w : config.warnings) std::cerr << "warning: " << w << '\n';

    try {
        dtbc::CommandResult result;
        if (run->parsed()) {
            result = dtbc::cmd_run(config);
        } else if (space->parsed()) {
            result = dtbc::cmd_converge_space(config);
        } else if (time->parsed()) {
            result = dtbc::cmd_converge_time(config);
        } else {
            result = dtbc::cmd_kernels_dump(config);
        }
        std::cout << result.summary << '\n';
    } catch (const dtbc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
