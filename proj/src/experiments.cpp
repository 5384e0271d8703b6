#include "dtbc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "dtbc/orthopoly.hpp"
#include "dtbc/reference.hpp"
#include "dtbc/tbc.hpp"

namespace dtbc {

namespace fs = std::filesystem;

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw LengthError("fit_line: need two or more (x, y) pairs");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw DegenerateError("fit_line: all x values coincide");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

namespace {

// Nodal values (and nodes) of every step 1..M of one run.
struct RunHistory {
    std::vector<double> nodes;  // scaled
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> legendre;
};

RunHistory run_all_steps(const ProblemSpec& p, bool keep_legendre) {
    const Solver solver(p);
    RunHistory h;
    h.nodes = solver.rule().nodes;
    h.u.reserve(p.n_steps);
    if (keep_legendre) h.legendre.reserve(p.n_steps);
    SolverState state = solver.initial_state();
    for (int m = 1; m <= p.n_steps; ++m) {
        try {
            state = solver.step(std::move(state));
        } catch (const Error& e) {
            throw StepError(m, e.what());
        }
        h.u.push_back(state.u_nodes);
        if (keep_legendre) h.legendre.push_back(state.legendre);
    }
    return h;
}

std::vector<double> final_values(const ProblemSpec& p, std::vector<double>* nodes) {
    const Solver solver(p);
    const double t = p.t_final;
    const Trajectory tr = run(solver, std::span<const double>(&t, 1));
    if (nodes) *nodes = tr.snapshots.back().x;
    return tr.snapshots.back().u;
}

std::vector<double> scaled_to_physical(std::span<const double> xi, double a) {
    std::vector<double> x;
    x.reserve(xi.size());
    for (double v : xi) x.push_back(a * v);
    return x;
}

void write_manifest(const fs::path& path, const RunConfig& c, const std::vector<std::pair<std::string, std::string>>& extra,
                    const std::vector<fs::path>& files) {
    std::ofstream out(path);
    out << "# run manifest\n";
    write_config(out, c);
    for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
    for (const auto& w : c.warnings) out << "warning = " << w << '\n';
    for (const auto& f : files) out << "file = " << f.filename().string() << '\n';
}

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

std::string short_num(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::pair<std::string, std::string>> kernel_entries(const TbcKernels& k) {
    return {{"tau_scaled", num(k.tau)},
            {"g_minus_scaled", num(k.g_minus)},
            {"g_plus_scaled", num(k.g_plus)},
            {"contour_radius", num(k.radius)},
            {"z_samples", std::to_string(k.n_samples)},
            {"kernel_max_imag", num(k.diagnostics.max_imag)},
            {"kernel_max_poly_residual", num(k.diagnostics.max_poly_residual)},
            {"kernel_max_vieta_residual", num(k.diagnostics.max_vieta_residual)},
            {"kernel_samples_classified",
             std::to_string(k.diagnostics.samples_classified) + "/" + std::to_string(k.diagnostics.samples_checked)}};
}

}  // namespace

bool exact_solution(const RunConfig& c, double t, std::span<const double> x, std::vector<double>& out) {
    if (c.g.cosine) return false;
    out.clear();
    if (t == 0.0) {
        for (double v : x) out.push_back(gaussian(v));
        return true;
    }
    if (c.g.value == 0.0) {
        for (double v : x) out.push_back(airy_exact(t, v, gaussian));
        return true;
    }
    out = fourier_constant_g(t, x, gaussian, c.g.value);
    return true;
}

SpaceSweep space_sweep(const RunConfig& c) {
    ProblemSpec base = make_problem(c);
    const double tau = c.t_final / c.n_steps;

    ProblemSpec ref_spec = base;
    ref_spec.n_modes = c.reference_modes;
    auto ref_future = std::async(std::launch::async, [ref_spec] { return run_all_steps(ref_spec, true); });
    std::vector<std::future<RunHistory>> runs;
    for (int n : c.space_sweep) {
        ProblemSpec p = base;
        p.n_modes = n;
        runs.push_back(std::async(std::launch::async, [p] { return run_all_steps(p, false); }));
    }
    const RunHistory ref = ref_future.get();

    SpaceSweep sweep;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const RunHistory h = runs[i].get();
        const Eigen::MatrixXd v = legendre_vandermonde(h.nodes, c.reference_modes + 1);
        const std::vector<double> x = scaled_to_physical(h.nodes, c.half_width);
        std::vector<Snapshot> num_snaps, ref_snaps;
        num_snaps.reserve(h.u.size());
        ref_snaps.reserve(h.u.size());
        for (std::size_t m = 0; m < h.u.size(); ++m) {
            const Eigen::Map<const Eigen::VectorXd> coef(ref.legendre[m].data(),
                                                         static_cast<Eigen::Index>(ref.legendre[m].size()));
            const Eigen::VectorXd r = v * coef;
            const double t = (m + 1) * tau;
            num_snaps.push_back({t, static_cast<int>(m + 1), x, h.u[m]});
            ref_snaps.push_back({t, static_cast<int>(m + 1), x, std::vector<double>(r.data(), r.data() + r.size())});
        }
        const ErrorReport e = error_norms(num_snaps, ref_snaps, tau, c.error_norm);
        sweep.rows.push_back({c.space_sweep[i], e.l2_time, e.per_snapshot.back()});
    }

    std::vector<double> n2, logs, ns;
    for (const auto& r : sweep.rows) {
        ns.push_back(r.n_modes);
        n2.push_back(static_cast<double>(r.n_modes) * r.n_modes);
        logs.push_back(std::log(std::max(r.error_l2, 1e-300)));
    }
    if (sweep.rows.size() >= 2) sweep.rate = -fit_line(n2, logs).slope;
    if (sweep.rows.size() >= 3) {
        std::vector<double> slopes;
        for (std::size_t i = 0; i + 1 < ns.size(); ++i) slopes.push_back((logs[i + 1] - logs[i]) / (ns[i + 1] - ns[i]));
        sweep.superlinear = std::all_of(slopes.begin(), slopes.end(), [](double s) { return s < 0.0; });
        for (std::size_t i = 1; i < slopes.size(); ++i) sweep.superlinear = sweep.superlinear && slopes[i] < slopes[0];
    }
    return sweep;
}

TimeSweep time_sweep(const RunConfig& c) {
    ProblemSpec base = make_problem(c);
    std::vector<std::future<std::pair<std::vector<double>, std::vector<double>>>> runs;
    for (int m : c.time_sweep) {
        ProblemSpec p = base;
        p.n_steps = m;
        runs.push_back(std::async(std::launch::async, [p] {
            std::vector<double> x;
            std::vector<double> u = final_values(p, &x);
            return std::make_pair(std::move(x), std::move(u));
        }));
    }

    TimeSweep sweep;
    std::vector<double> reference;
    std::vector<double> x;
    std::future<std::vector<double>> self_ref;
    if (c.g.cosine) {
        ProblemSpec p = base;
        p.n_steps = c.reference_steps;
        sweep.reference = "self:" + std::to_string(c.reference_steps);
        self_ref = std::async(std::launch::async, [p] { return final_values(p, nullptr); });
    } else {
        sweep.reference = c.g.value == 0.0 ? "airy_exact" : "fourier";
    }

    std::vector<std::pair<std::vector<double>, std::vector<double>>> results;
    for (auto& r : runs) results.push_back(r.get());
    if (!results.empty()) x = results.front().first;
    if (c.g.cosine) {
        reference = self_ref.get();
    } else if (!results.empty()) {
        exact_solution(c, c.t_final, x, reference);
    }

    std::vector<double> log_tau, log_err;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const double tau = c.t_final / c.time_sweep[i];
        const Snapshot num_snap{c.t_final, c.time_sweep[i], x, results[i].second};
        const Snapshot ref_snap{c.t_final, c.time_sweep[i], x, reference};
        const ErrorReport e =
            error_norms(std::span<const Snapshot>(&num_snap, 1), std::span<const Snapshot>(&ref_snap, 1), tau,
                        c.error_norm);
        sweep.rows.push_back({c.time_sweep[i], tau, e.per_snapshot.front()});
        log_tau.push_back(std::log(tau));
        log_err.push_back(std::log(std::max(e.per_snapshot.front(), 1e-300)));
    }
    if (sweep.rows.size() >= 2) sweep.slope = fit_line(log_tau, log_err).slope;
    return sweep;
}

CommandResult cmd_run(const RunConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec p = make_problem(c);
    const Solver solver(p);
    const Trajectory tr = run(solver, c.snapshot_times);

    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    CommandResult result;
    double final_error = -1.0;
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        const Snapshot& s = tr.snapshots[i];
        std::vector<double> exact;
        const bool have_exact = exact_solution(c, s.time, s.x, exact);
        std::ostringstream name;
        name << "snapshot_" << std::setw(3) << std::setfill('0') << i << "_t" << s.time << ".csv";
        const fs::path path = dir / name.str();
        std::ofstream out(path, std::ios::binary);
        out << "x,u_numeric,u_exact,abs_error\n" << std::setprecision(17);
        double num2 = 0.0, den2 = 0.0;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            out << s.x[k] << ',' << s.u[k] << ',';
            if (have_exact) {
                const double d = std::abs(s.u[k] - exact[k]);
                out << exact[k] << ',' << d;
                num2 += d * d;
                den2 += exact[k] * exact[k];
            } else {
                out << ',';
            }
            out << '\n';
        }
        if (have_exact && den2 > 0.0) final_error = std::sqrt(num2 / den2);
        result.files.push_back(path);
    }

    const double wall = seconds_since(t0);
    auto extra = kernel_entries(solver.kernels());
    extra.emplace_back("shared_dual", solver.basis().shared_dual ? "true" : "false");
    extra.emplace_back("max_bc_residual", num(tr.max_bc_residual));
    if (final_error >= 0.0) extra.emplace_back("final_relative_l2_error", num(final_error));
    extra.emplace_back("wall_time_s", num(wall));
    const fs::path manifest = dir / "manifest.txt";
    write_manifest(manifest, c, extra, result.files);
    result.files.push_back(manifest);

    std::ostringstream summary;
    summary << "run " << to_string(c.experiment) << ": g=" << to_string(c.g) << " N=" << c.n_modes
            << " m=" << c.n_steps << " T=" << c.t_final << " snapshots=" << tr.snapshots.size();
    if (final_error >= 0.0) summary << " final_rel_l2_error=" << short_num(final_error);
    summary << " max_bc_residual=" << short_num(tr.max_bc_residual) << " wall=" << short_num(wall) << "s";
    result.summary = summary.str();
    return result;
}

CommandResult cmd_converge_space(const RunConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpaceSweep sweep = space_sweep(c);
    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    CommandResult result;
    const fs::path csv = dir / "converge_space.csv";
    {
        std::ofstream out(csv, std::ios::binary);
        out << "n_modes,error_l2,final_error\n" << std::setprecision(17);
        for (const auto& r : sweep.rows) out << r.n_modes << ',' << r.error_l2 << ',' << r.final_error << '\n';
    }
    result.files.push_back(csv);
    const double wall = seconds_since(t0);
    const fs::path manifest = dir / "manifest.txt";
    write_manifest(manifest, c,
                   {{"supergeometric_rate", num(sweep.rate)},
                    {"superlinear", sweep.superlinear ? "true" : "false"},
                    {"wall_time_s", num(wall)}},
                   result.files);
    result.files.push_back(manifest);
    std::ostringstream summary;
    summary << "converge-space: g=" << to_string(c.g) << " m=" << c.n_steps << " reference N=" << c.reference_modes
            << " rate c=" << short_num(sweep.rate) << " (err ~ exp(-c N^2))";
    if (!sweep.rows.empty()) {
        summary << " error(N=" << sweep.rows.back().n_modes << ")=" << short_num(sweep.rows.back().error_l2);
    }
    summary << " wall=" << short_num(wall) << "s";
    result.summary = summary.str();
    return result;
}

CommandResult cmd_converge_time(const RunConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const TimeSweep sweep = time_sweep(c);
    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    CommandResult result;
    const fs::path csv = dir / "converge_time.csv";
    {
        std::ofstream out(csv, std::ios::binary);
        out << "n_steps,tau,error\n" << std::setprecision(17);
        for (const auto& r : sweep.rows) out << r.n_steps << ',' << r.tau << ',' << r.error << '\n';
    }
    result.files.push_back(csv);
    const double wall = seconds_since(t0);
    const fs::path manifest = dir / "manifest.txt";
    write_manifest(manifest, c,
                   {{"reference", sweep.reference}, {"fitted_order", num(sweep.slope)}, {"wall_time_s", num(wall)}},
                   result.files);
    result.files.push_back(manifest);
    std::ostringstream summary;
    summary << "converge-time: g=" << to_string(c.g) << " N=" << c.n_modes << " reference=" << sweep.reference
            << " order=" << short_num(sweep.slope) << " wall=" << short_num(wall) << "s";
    result.summary = summary.str();
    return result;
}

CommandResult cmd_kernels_dump(const RunConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec p = make_problem(c);
    validate(p);
    const ScaledProblem s = scale_problem(p);
    const double c_eff = c.c_radius / s.t_final;
    const TbcKernels k = build_kernels(s.tau, s.g_minus, s.g_plus, c.n_steps, c_eff);
    const double delta = kernel_self_convergence(k, c_eff);

    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    CommandResult result;
    const fs::path csv = dir / "kernels.csv";
    {
        std::ofstream out(csv, std::ios::binary);
        write_kernels_csv(out, k);
    }
    result.files.push_back(csv);
    auto entries = kernel_entries(k);
    entries.emplace_back("self_convergence_delta", num(delta));
    const fs::path diag = dir / "kernels_diagnostics.txt";
    {
        std::ofstream out(diag, std::ios::binary);
        for (const auto& [key, v] : entries) out << key << " = " << v << '\n';
    }
    result.files.push_back(diag);
    entries.emplace_back("wall_time_s", num(seconds_since(t0)));
    const fs::path manifest = dir / "manifest.txt";
    write_manifest(manifest, c, entries, result.files);
    result.files.push_back(manifest);

    std::ostringstream summary;
    summary << "kernels-dump: taps=" << k.m_max() + 1 << " z_samples=" << k.n_samples
            << " max_imag=" << short_num(k.diagnostics.max_imag)
            << " classified=" << k.diagnostics.samples_classified << "/" << k.diagnostics.samples_checked
            << " self_convergence=" << short_num(delta);
    result.summary = summary.str();
    return result;
}

}  // namespace dtbc
