#include "dtbc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dtbc {

Coefficient constant_coefficient(double g) {
    std::ostringstream d;
    d << "constant:" << g;
    return {[g](double) { return g; }, [](double) { return 0.0; }, d.str()};
}

Coefficient cosine_coefficient(double half_width) {
    const double a = half_width;
    const double pi = std::numbers::pi;
    auto clamp = [a](double x) { return std::clamp(x, -a, a); };
    return {[=](double x) { return pi * (1.0 + std::cos(pi * (clamp(x) + a) / (2.0 * a))); },
            [=](double x) {
                if (x <= -a || x >= a) return 0.0;
                return -pi * pi / (2.0 * a) * std::sin(pi * (x + a) / (2.0 * a));
            },
            "cosine"};
}

void validate(const ProblemSpec& spec) {
    const double a = spec.half_width;
    if (!(a > 0.0)) throw ConfigError("half_width must be positive");
    if (!(spec.t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (spec.n_steps < 1) throw ConfigError("n_steps must be >= 1");
    if (spec.n_modes < 8) throw ConfigError("n_modes must be >= 8");
    if (!(spec.c_radius > 0.0)) throw ConfigError("c_radius must be positive");
    if (!spec.u0 || !spec.g.value || !spec.g.derivative) throw ConfigError("u0 and g must be set");
    if (std::abs(spec.u0(-a)) >= 1e-12 || std::abs(spec.u0(a)) >= 1e-12) {
        throw ConfigError("initial data does not vanish at the boundaries (|u0(+-A)| >= 1e-12)");
    }
    if (std::abs(spec.g.derivative(-a)) >= 1e-12 || std::abs(spec.g.derivative(a)) >= 1e-12) {
        throw ConfigError("g'(+-A) must vanish (|g'(+-A)| >= 1e-12)");
    }
}

ScaledProblem scale_problem(const ProblemSpec& spec) {
    const double a = spec.half_width;
    ScaledProblem s;
    s.half_width = a;
    auto g = spec.g.value;
    auto gx = spec.g.derivative;
    s.g = [g, a](double xi) { return a * a * g(a * xi); };
    s.g_x = [gx, a](double xi) { return a * a * a * gx(a * xi); };
    s.g_minus = s.g(-1.0);
    s.g_plus = s.g(1.0);
    s.t_final = spec.t_final / (a * a * a);
    s.tau = s.t_final / spec.n_steps;
    return s;
}

DerivativeValues spectral_derivative(std::span<const double> legendre, const SpectralRule& rule, int order) {
    if (order < 1 || order > 2) throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
    std::vector<double> d = legendre_series_derivative(legendre);
    if (order == 2) d = legendre_series_derivative(d);
    DerivativeValues out;
    out.nodes.reserve(rule.nodes.size());
    for (double x : rule.nodes) out.nodes.push_back(legendre_series_eval(d, x));
    out.left = legendre_series_endpoint(d, -1, 0);
    out.right = legendre_series_endpoint(d, 1, 0);
    return out;
}

std::vector<double> reconstruct(std::span<const double> w_hat, const LiftingPolynomial& p2,
                                const PetrovGalerkinBasis& basis) {
    std::vector<double> c(basis.n + 1, 0.0);
    for (int j = 0; j < basis.size(); ++j) {
        const auto& t = basis.trial[j];
        c[j] += w_hat[j];
        c[j + 1] += w_hat[j] * t.alpha;
        c[j + 2] += w_hat[j] * t.beta;
        c[j + 3] += w_hat[j] * t.gamma;
    }
    const auto p = p2.legendre();
    for (int i = 0; i < 3; ++i) c[i] += p[i];
    return c;
}

namespace {

BoundaryTraces traces_of(std::span<const double> legendre) {
    return {legendre_series_endpoint(legendre, -1, 0), legendre_series_endpoint(legendre, -1, 1),
            legendre_series_endpoint(legendre, -1, 2), legendre_series_endpoint(legendre, 1, 0),
            legendre_series_endpoint(legendre, 1, 1),  legendre_series_endpoint(legendre, 1, 2)};
}

std::vector<double> nodal_values(const Eigen::MatrixXd& v, std::span<const double> c) {
    const Eigen::Map<const Eigen::VectorXd> cv(c.data(), static_cast<Eigen::Index>(c.size()));
    const Eigen::VectorXd r = v * cv;
    return {r.data(), r.data() + r.size()};
}

TbcKernels kernels_for(const ProblemSpec& spec, const ScaledProblem& s) {
    return build_kernels(s.tau, s.g_minus, s.g_plus, spec.n_steps, spec.c_radius / s.t_final);
}

}  // namespace

Solver::Solver(const ProblemSpec& spec)
    : spec_((validate(spec), spec)),
      scaled_(scale_problem(spec_)),
      rule_(build_rule(spec_.n_modes)),
      kernels_(kernels_for(spec_, scaled_)),
      basis_(build_basis(rule_, kernels_.zeroth())),
      system_(assemble_system(basis_, rule_, scaled_.tau)),
      vandermonde_(legendre_vandermonde(rule_.nodes, spec_.n_modes + 1)) {
    g_nodes_.reserve(rule_.nodes.size());
    for (double x : rule_.nodes) g_nodes_.push_back(scaled_.g(x));
    g_right_ = scaled_.g(1.0);
    gx_right_ = scaled_.g_x(1.0);
}

std::vector<double> Solver::physical_nodes() const {
    std::vector<double> x;
    x.reserve(rule_.nodes.size());
    for (double xi : rule_.nodes) x.push_back(scaled_.to_physical_x(xi));
    return x;
}

SolverState Solver::initial_state() const {
    const int n = rule_.n_points;
    SolverState s;
    s.u_nodes.resize(n);
    for (int i = 0; i < n; ++i) s.u_nodes[i] = spec_.u0(scaled_.to_physical_x(rule_.nodes[i]));
    // Interpolant of degree N - 1 through the nodal values.
    const Eigen::MatrixXd square = vandermonde_.leftCols(n);
    const Eigen::Map<const Eigen::VectorXd> values(s.u_nodes.data(), n);
    const Eigen::VectorXd c = square.partialPivLu().solve(values);
    s.legendre.assign(n + 1, 0.0);
    for (int i = 0; i < n; ++i) s.legendre[i] = c(i);
    const std::vector<double> dc = legendre_series_derivative(s.legendre);
    s.ux_nodes = nodal_values(vandermonde_, dc);
    s.history.append(traces_of(s.legendre));
    return s;
}

std::array<double, 3> Solver::boundary_residuals(std::span<const double> legendre, const HistorySums& h) const {
    const auto y = basis_.y0;
    const BoundaryTraces t = traces_of(legendre);
    const double r1 = t.u_left - y[0] * t.ux_left - y[1] * t.uxx_left - h.h1;
    const double r2 = t.u_right - y[2] * t.uxx_right - h.h2;
    const double r3 = t.ux_right - y[3] * t.uxx_right - h.h3;
    const double s1 = std::abs(t.u_left) + std::abs(y[0] * t.ux_left) + std::abs(y[1] * t.uxx_left) + std::abs(h.h1);
    const double s2 = std::abs(t.u_right) + std::abs(y[2] * t.uxx_right) + std::abs(h.h2);
    const double s3 = std::abs(t.ux_right) + std::abs(y[3] * t.uxx_right) + std::abs(h.h3);
    // Traces near zero carry the rounding error of the whole expansion, so the
    // size of u (an upper bound of max |u| on [-1, 1]) is a floor for the scale.
    double size = 0.0;
    for (double c : legendre) size += std::abs(c);
    auto rel = [size](double r, double s) {
        const double scale = std::max(s, size);
        return scale > 0.0 ? std::abs(r) / scale : 0.0;
    };
    return {rel(r1, s1), rel(r2, s2), rel(r3, s3)};
}

SolverState Solver::step(SolverState state) const {
    const int m = state.step + 1;
    const double tau = scaled_.tau;

    const HistorySums h = history_rhs(kernels_, state.history, m);
    const LiftingPolynomial p2 = lifting(h.h1, h.h2, h.h3, basis_.y0);

    RightEndpointData right;
    right.u = legendre_series_endpoint(state.legendre, 1, 0);
    right.ux = legendre_series_endpoint(state.legendre, 1, 1);
    right.uxx = legendre_series_endpoint(state.legendre, 1, 2);
    right.g = g_right_;
    right.gx = gx_right_;
    const std::vector<double> rhs =
        assemble_rhs(state.u_nodes, state.ux_nodes, g_nodes_, right, tau, p2, basis_, rule_);

    state.w_hat = solve_step_system(system_, rhs);
    state.p2 = p2;
    state.legendre = reconstruct(state.w_hat, p2, basis_);
    state.u_nodes = nodal_values(vandermonde_, state.legendre);
    const std::vector<double> dc = legendre_series_derivative(state.legendre);
    state.ux_nodes = nodal_values(vandermonde_, dc);
    for (double v : state.u_nodes) {
        if (!std::isfinite(v)) throw NonFiniteError("non-finite nodal value after step " + std::to_string(m));
    }
    const auto res = boundary_residuals(state.legendre, h);
    state.bc_residual = *std::max_element(res.begin(), res.end());
    state.history.append(traces_of(state.legendre));
    state.step = m;
    return state;
}

Trajectory run(const ProblemSpec& spec, std::span<const double> snapshot_times) {
    const Solver solver(spec);
    return run(solver, snapshot_times);
}

Trajectory run(const Solver& solver, std::span<const double> snapshot_times) {
    const auto& spec = solver.spec();
    const double tau = spec.t_final / spec.n_steps;
    std::vector<std::pair<int, double>> wanted;
    for (double t : snapshot_times) {
        if (t < 0.0 || t > spec.t_final * (1.0 + 1e-12)) throw ConfigError("snapshot time outside [0, t_final]");
        wanted.emplace_back(static_cast<int>(std::lround(t / tau)), t);
    }

    Trajectory traj;
    traj.kernel_diagnostics = solver.kernels().diagnostics;
    traj.shared_dual = solver.basis().shared_dual;
    const std::vector<double> x = solver.physical_nodes();
    auto record = [&](const SolverState& s) {
        for (const auto& [step, t] : wanted) {
            if (step == s.step) traj.snapshots.push_back({s.step * tau, s.step, x, s.u_nodes});
        }
    };

    SolverState state = solver.initial_state();
    record(state);
    for (int m = 1; m <= spec.n_steps; ++m) {
        try {
            state = solver.step(std::move(state));
        } catch (const Error& e) {
            throw StepError(m, e.what());
        }
        traj.max_bc_residual = std::max(traj.max_bc_residual, state.bc_residual);
        record(state);
    }
    std::stable_sort(traj.snapshots.begin(), traj.snapshots.end(),
                     [](const Snapshot& a, const Snapshot& b) { return a.step < b.step; });
    return traj;
}

}  // namespace dtbc
