#include "dtbc/config.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace dtbc {

namespace {

constexpr std::pair<Experiment, const char*> experiment_names[] = {
    {Experiment::AiryG0, "airy_g0"},           {Experiment::ConstG, "const_g"},
    {Experiment::VariableG, "variable_g"},     {Experiment::KernelsDump, "kernels_dump"},
    {Experiment::ConvergeSpace, "converge_space"}, {Experiment::ConvergeTime, "converge_time"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError("invalid number for " + key + ": '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("invalid integer for " + key + ": '" + text + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

int to_int(const std::string& key, long long v) {
    if (v < 1 || v > (1LL << 24)) throw ConfigError(key + " out of range [1, 2^24]");
    return static_cast<int>(v);
}

std::string join(const auto& values) {
    std::ostringstream out;
    out << std::setprecision(17);
    bool first = true;
    for (const auto& v : values) {
        if (!first) out << ',';
        out << v;
        first = false;
    }
    return out.str();
}

std::string to_string(ErrorMode m) {
    switch (m) {
    case ErrorMode::Normwise:
        return "relative";
    case ErrorMode::Pointwise:
        return "pointwise";
    case ErrorMode::Absolute:
        return "absolute";
    }
    return "relative";
}

}  // namespace

std::string to_string(Experiment e) {
    for (const auto& [k, name] : experiment_names) {
        if (k == e) return name;
    }
    return "unknown";
}

Experiment parse_experiment(const std::string& name) {
    const std::string t = trim(name);
    for (const auto& [k, n] : experiment_names) {
        if (t == n) return k;
    }
    throw ConfigError("unknown experiment '" + name + "'");
}

GKind parse_g_kind(const std::string& text) {
    const std::string t = trim(text);
    if (t == "cosine") return {true, 0.0};
    const std::string prefix = "constant:";
    const std::string number = t.rfind(prefix, 0) == 0 ? t.substr(prefix.size()) : t;
    return {false, parse_double("g_kind", number)};
}

std::string to_string(const GKind& g) {
    if (g.cosine) return "cosine";
    std::ostringstream out;
    out << "constant:" << std::setprecision(17) << g.value;
    return out.str();
}

RunConfig preset(Experiment e) {
    RunConfig c;
    c.experiment = e;
    switch (e) {
    case Experiment::AiryG0:
        c.g = {false, 0.0};
        c.t_final = 2.0;
        c.n_steps = 2048;
        c.n_modes = 256;
        c.snapshot_times = {0.0, 0.5, 1.0, 2.0};
        break;
    case Experiment::ConstG:
        c.g = {false, 6.0};
        c.t_final = 2.0;
        c.n_steps = 16384;
        c.n_modes = 256;
        c.snapshot_times = {0.0, 0.5, 1.0, 2.0};
        break;
    case Experiment::VariableG:
        c.g = {true, 0.0};
        c.t_final = 1.0;
        c.n_steps = 8192;
        c.n_modes = 256;
        c.snapshot_times = {0.0, 0.5, 1.0};
        break;
    case Experiment::KernelsDump:
        c.g = {false, 0.0};
        c.t_final = 2.0;
        c.n_steps = 1024;
        c.n_modes = 64;
        break;
    case Experiment::ConvergeSpace:
        c.g = {false, 0.0};
        c.t_final = 0.5;
        c.n_steps = 8192;
        c.n_modes = 64;
        c.space_sweep = {16, 20, 24, 28, 32, 36, 40, 44, 48};
        c.reference_modes = 64;
        break;
    case Experiment::ConvergeTime:
        c.g = {false, 0.0};
        c.t_final = 0.5;
        c.n_steps = 1024;
        c.n_modes = 64;
        c.time_sweep = {128, 256, 512, 1024};
        c.reference_steps = 16384;
        break;
    }
    return c;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& value) {
    const std::string key = trim(raw_key);
    if (key == "experiment") {
        c.experiment = parse_experiment(value);
    } else if (key == "g_kind") {
        c.g = parse_g_kind(value);
    } else if (key == "half_width") {
        c.half_width = parse_double(key, value);
    } else if (key == "t_final") {
        c.t_final = parse_double(key, value);
    } else if (key == "n_steps") {
        c.n_steps = to_int(key, parse_integer(key, value));
    } else if (key == "n_modes") {
        c.n_modes = to_int(key, parse_integer(key, value));
    } else if (key == "c_radius") {
        c.c_radius = parse_double(key, value);
    } else if (key == "snapshot_times") {
        c.snapshot_times.clear();
        for (const auto& item : split_list(value)) c.snapshot_times.push_back(parse_double(key, item));
    } else if (key == "output_dir") {
        c.output_dir = trim(value);
        if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
    } else if (key == "seed") {
        const long long s = parse_integer(key, value);
        if (s < 0) throw ConfigError("seed must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "error_norm") {
        const std::string v = trim(value);
        if (v == "relative") {
            c.error_norm = ErrorMode::Normwise;
        } else if (v == "pointwise") {
            c.error_norm = ErrorMode::Pointwise;
        } else if (v == "absolute") {
            c.error_norm = ErrorMode::Absolute;
        } else {
            throw ConfigError("error_norm must be relative, pointwise or absolute");
        }
    } else if (key == "space_sweep") {
        c.space_sweep.clear();
        for (const auto& item : split_list(value)) c.space_sweep.push_back(to_int(key, parse_integer(key, item)));
    } else if (key == "reference_modes") {
        c.reference_modes = to_int(key, parse_integer(key, value));
    } else if (key == "time_sweep") {
        c.time_sweep.clear();
        for (const auto& item : split_list(value)) c.time_sweep.push_back(to_int(key, parse_integer(key, item)));
    } else if (key == "reference_steps") {
        c.reference_steps = to_int(key, parse_integer(key, value));
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

Settings parse_settings(std::istream& in) {
    Settings out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

Settings load_settings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    return parse_settings(in);
}

RunConfig make_config(Experiment fallback, const Settings& settings) {
    Experiment e = fallback;
    for (const auto& [k, v] : settings) {
        if (trim(k) == "experiment") e = parse_experiment(v);
    }
    RunConfig c = preset(e);
    for (const auto& [k, v] : settings) apply_setting(c, k, v);
    check(c);
    return c;
}

void check(RunConfig& c) {
    if (!(c.half_width > 0.0)) throw ConfigError("half_width must be positive");
    if (!(c.t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (!(c.c_radius > 0.0)) throw ConfigError("c_radius must be positive");
    if (c.n_modes < 8) throw ConfigError("n_modes must be at least 8");
    for (double t : c.snapshot_times) {
        if (t < 0.0 || t > c.t_final) throw ConfigError("snapshot_times must lie in [0, t_final]");
    }
    for (int n : c.space_sweep) {
        if (n < 8) throw ConfigError("space_sweep entries must be at least 8");
    }
    if (c.reference_modes < 8) throw ConfigError("reference_modes must be at least 8");
    if (c.g.cosine && c.half_width != 6.0) {
        c.warnings.push_back("the cosine profile is stretched to the configured half_width");
    }
    auto pow2 = [&](const char* name, int v) {
        if (!std::has_single_bit(static_cast<unsigned>(v))) {
            c.warnings.push_back(std::string(name) + " = " + std::to_string(v) + " is not a power of two");
        }
    };
    pow2("n_steps", c.n_steps);
    pow2("n_modes", c.n_modes);
}

void write_config(std::ostream& out, const RunConfig& c) {
    out << std::setprecision(17);
    out << "experiment = " << to_string(c.experiment) << '\n';
    out << "g_kind = " << to_string(c.g) << '\n';
    out << "half_width = " << c.half_width << '\n';
    out << "t_final = " << c.t_final << '\n';
    out << "n_steps = " << c.n_steps << '\n';
    out << "n_modes = " << c.n_modes << '\n';
    out << "c_radius = " << c.c_radius << '\n';
    out << "snapshot_times = " << join(c.snapshot_times) << '\n';
    out << "output_dir = " << c.output_dir << '\n';
    out << "seed = " << c.seed << '\n';
    out << "error_norm = " << to_string(c.error_norm) << '\n';
    out << "space_sweep = " << join(c.space_sweep) << '\n';
    out << "reference_modes = " << c.reference_modes << '\n';
    out << "time_sweep = " << join(c.time_sweep) << '\n';
    out << "reference_steps = " << c.reference_steps << '\n';
}

double gaussian(double x) { return std::exp(-x * x); }

Coefficient make_coefficient(const GKind& g, double half_width) {
    return g.cosine ? cosine_coefficient(half_width) : constant_coefficient(g.value);
}

ProblemSpec make_problem(const RunConfig& c) {
    ProblemSpec p;
    p.half_width = c.half_width;
    p.g = make_coefficient(c.g, c.half_width);
    p.u0 = gaussian;
    p.t_final = c.t_final;
    p.n_steps = c.n_steps;
    p.n_modes = c.n_modes;
    p.c_radius = c.c_radius;
    return p;
}

}  // namespace dtbc
