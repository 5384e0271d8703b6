#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dtbc/config.hpp"

namespace dtbc {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct SpaceSweepRow {
    int n_modes = 0;
    /// sqrt(tau sum_m (err^m)^2) over all steps, physical tau.
    double error_l2 = 0.0;
    /// err^m at the final step.
    double final_error = 0.0;
};

struct SpaceSweep {
    std::vector<SpaceSweepRow> rows;
    /// c in err ~ exp(-c N^2), from a fit of log(error_l2) against N^2.
    double rate = 0.0;
    /// log(error_l2) falls with N, and ever faster: each successive slope in N is
    /// steeper than the first one.
    bool superlinear = false;
};

/// Runs every N of config.space_sweep and the reference N = config.reference_modes
/// with config.n_steps steps (concurrently); errors compare each run with the
/// reference polynomial evaluated at the run's own nodes.
SpaceSweep space_sweep(const RunConfig& config);

struct TimeSweepRow {
    int n_steps = 0;
    double tau = 0.0;
    double error = 0.0;
};

struct TimeSweep {
    std::vector<TimeSweepRow> rows;
    /// Slope of log(error) against log(tau).
    double slope = 0.0;
    /// "airy_exact", "fourier" or "self:<steps>".
    std::string reference;
};

/// err at t_final for every m of config.time_sweep with N = config.n_modes, against
/// the exact solution (constant g) or an m = config.reference_steps run (cosine g).
TimeSweep time_sweep(const RunConfig& config);

/// Exact solution at the given physical points if one exists for the configuration.
/// Returns false for variable g.
bool exact_solution(const RunConfig& config, double t, std::span<const double> x, std::vector<double>& out);

struct CommandResult {
    std::vector<std::filesystem::path> files;
    std::string summary;
};

/// Snapshot CSVs (x, u_numeric, u_exact, abs_error), manifest.txt and a summary line.
CommandResult cmd_run(const RunConfig& config);
/// converge_space.csv (n_modes, error_l2, final_error) and manifest.txt.
CommandResult cmd_converge_space(const RunConfig& config);
/// converge_time.csv (n_steps, tau, error) and manifest.txt.
CommandResult cmd_converge_time(const RunConfig& config);
/// kernels.csv, kernels_diagnostics.txt and manifest.txt.
CommandResult cmd_kernels_dump(const RunConfig& config);

}  // namespace dtbc
