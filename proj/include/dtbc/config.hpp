#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dtbc/errors.hpp"
#include "dtbc/reference.hpp"
#include "dtbc/solver.hpp"

namespace dtbc {

enum class Experiment { AiryG0, ConstG, VariableG, KernelsDump, ConvergeSpace, ConvergeTime };

std::string to_string(Experiment e);
/// Throws ConfigError for unknown names.
Experiment parse_experiment(const std::string& name);

/// Either a constant speed or the cosine profile.
struct GKind {
    bool cosine = false;
    double value = 0.0;
};

/// "constant:<v>", a bare number, or "cosine".
GKind parse_g_kind(const std::string& text);
std::string to_string(const GKind& g);

struct RunConfig {
    Experiment experiment = Experiment::AiryG0;
    GKind g;
    double half_width = 6.0;
    double t_final = 2.0;
    int n_steps = 2048;
    int n_modes = 256;
    double c_radius = 1.0;
    std::vector<double> snapshot_times;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    ErrorMode error_norm = ErrorMode::Normwise;

    /// Sweep parameters of the convergence studies.
    std::vector<int> space_sweep;
    int reference_modes = 64;
    std::vector<int> time_sweep;
    int reference_steps = 16384;

    /// Non-fatal remarks (e.g. sizes that are not powers of two).
    std::vector<std::string> warnings;
};

/// Settings as (key, value) pairs in the order they were given.
using Settings = std::vector<std::pair<std::string, std::string>>;

/// Default settings of each experiment.
RunConfig preset(Experiment e);

/// Applies one key = value setting; throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses flat "key = value" lines; '#' starts a comment.
Settings parse_settings(std::istream& in);
Settings load_settings(const std::string& path);

/// The preset of the effective experiment followed by the settings in order.
/// The experiment is taken from the last "experiment" setting, else `fallback`.
RunConfig make_config(Experiment fallback, const Settings& settings);

/// Range and consistency checks; throws ConfigError, appends warnings.
void check(RunConfig& config);

/// Every numerics-relevant parameter as key = value lines.
void write_config(std::ostream& out, const RunConfig& config);

/// e^{-x^2}, the initial datum of all experiments.
double gaussian(double x);

Coefficient make_coefficient(const GKind& g, double half_width);

/// The solver problem described by the configuration.
ProblemSpec make_problem(const RunConfig& config);

}  // namespace dtbc
