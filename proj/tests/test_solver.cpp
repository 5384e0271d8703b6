#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "dtbc/errors.hpp"
#include "dtbc/solver.hpp"

using namespace dtbc;
using doctest::Approx;

namespace {

ProblemSpec gaussian_problem(double g, int n_modes, int n_steps, double t_final) {
    ProblemSpec p;
    p.g = constant_coefficient(g);
    p.u0 = [](double x) { return std::exp(-x * x); };
    p.n_modes = n_modes;
    p.n_steps = n_steps;
    p.t_final = t_final;
    return p;
}

}  // namespace

TEST_CASE("scaling to [-1, 1]") {
    ProblemSpec p = gaussian_problem(6.0, 16, 10, 2.0);
    ScaledProblem s = scale_problem(p);
    CHECK(s.g(0.3) == Approx(216.0));
    CHECK(s.g_minus == Approx(216.0));
    CHECK(s.t_final == Approx(2.0 / 216.0));
    CHECK(s.tau == Approx(2.0 / 2160.0));
    CHECK(s.to_physical_x(-1.0) == -6.0);
    CHECK(s.to_physical_t(s.t_final) == Approx(2.0));

    p.half_width = 1.0;
    p.g = cosine_coefficient(1.0);
    s = scale_problem(p);
    for (double x : {-0.8, 0.0, 0.4}) {
        CHECK(s.g(x) == Approx(p.g.value(x)));
        CHECK(s.g_x(x) == Approx(p.g.derivative(x)));
    }
    CHECK(s.t_final == Approx(2.0));

    p = gaussian_problem(0.0, 16, 4, 1.0);
    s = scale_problem(p);
    CHECK(s.g(0.5) == 0.0);
    CHECK(s.t_final == Approx(1.0 / 216.0));
}

TEST_CASE("cosine profile") {
    const Coefficient g = cosine_coefficient();
    const double pi = std::numbers::pi;
    CHECK(g.value(-6.0) == Approx(2.0 * pi));
    CHECK(g.value(6.0) == Approx(0.0).scale(1.0));
    CHECK(g.value(0.0) == Approx(pi * (1.0 + std::cos(pi / 2.0))));
    CHECK(g.value(-9.0) == Approx(2.0 * pi));
    CHECK(std::abs(g.derivative(-6.0)) < 1e-15);
    CHECK(std::abs(g.derivative(6.0)) < 1e-15);
    const double h = 1e-6;
    CHECK(g.derivative(1.3) == Approx((g.value(1.3 + h) - g.value(1.3 - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("spectral derivative") {
    const SpectralRule rule = build_rule(12);
    const std::vector<double> x2 = {1.0 / 3.0, 0.0, 2.0 / 3.0};
    const DerivativeValues d1 = spectral_derivative(x2, rule, 1);
    const DerivativeValues d2 = spectral_derivative(x2, rule, 2);
    for (int i = 0; i < rule.n_points; ++i) {
        CHECK(d1.nodes[i] == Approx(2.0 * rule.nodes[i]).scale(1.0));
        CHECK(d2.nodes[i] == Approx(2.0));
    }
    CHECK(d1.left == Approx(-2.0));
    CHECK(d1.right == Approx(2.0));
    const std::vector<double> l3 = {0, 0, 0, 1};
    CHECK(spectral_derivative(l3, rule, 1).right == Approx(6.0));
    CHECK_THROWS_AS(spectral_derivative(l3, rule, 3), std::invalid_argument);
}

TEST_CASE("validation of the problem") {
    ProblemSpec p = gaussian_problem(0.0, 16, 4, 1.0);
    CHECK_NOTHROW(validate(p));
    p.u0 = [](double x) { return std::exp(-x * x / 10.0); };
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = gaussian_problem(0.0, 16, 4, 1.0);
    p.g = {[](double x) { return x; }, [](double) { return 1.0; }, "linear"};
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = gaussian_problem(0.0, 4, 4, 1.0);
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = gaussian_problem(0.0, 16, 0, 1.0);
    CHECK_THROWS_AS(Solver{p}, ConfigError);
}

TEST_CASE("zero initial data stays zero") {
    ProblemSpec p = gaussian_problem(6.0, 24, 50, 0.5);
    p.u0 = [](double) { return 0.0; };
    const Solver solver(p);
    SolverState s = solver.initial_state();
    for (int m = 0; m < 50; ++m) s = solver.step(std::move(s));
    for (double v : s.u_nodes) CHECK(v == 0.0);
}

TEST_CASE("one step satisfies the transparent boundary conditions") {
    for (double g : {0.0, 6.0, -6.0}) {
        const Solver solver(gaussian_problem(g, 32, 16, 0.5));
        SolverState s0 = solver.initial_state();
        const TbcKernels& k = solver.kernels();
        const BoundaryHistory history = s0.history;
        SolverState s1 = solver.step(s0);
        CHECK(s1.step == 1);
        CHECK(s1.history.size() == 2);
        CHECK(s1.bc_residual < 1e-9);

        // Independent evaluation of the three rows.
        const HistorySums h = history_rhs(k, history, 1);
        const auto& c = s1.legendre;
        const double b1 = legendre_series_endpoint(c, -1, 0) - k.y1_0 * legendre_series_endpoint(c, -1, 1) -
                          k.y2_0 * legendre_series_endpoint(c, -1, 2);
        const double b2 = legendre_series_endpoint(c, 1, 0) - k.y3_0 * legendre_series_endpoint(c, 1, 2);
        const double b3 = legendre_series_endpoint(c, 1, 1) - k.y4_0 * legendre_series_endpoint(c, 1, 2);
        CHECK(std::abs(b1 - h.h1) < 1e-9);
        CHECK(std::abs(b2 - h.h2) < 1e-9);
        CHECK(std::abs(b3 - h.h3) < 1e-9);

        // Nodal values are the reconstruction sum_j w_j phi_j + p2.
        const auto coeffs = reconstruct(s1.w_hat, s1.p2, solver.basis());
        for (int i = 0; i < solver.rule().n_points; ++i) {
            CHECK(std::abs(s1.u_nodes[i] - legendre_series_eval(coeffs, solver.rule().nodes[i])) < 1e-12);
        }
    }
}

TEST_CASE("boundary residual stays small over a run") {
    const Solver solver(gaussian_problem(6.0, 48, 128, 1.0));
    const double t = 1.0;
    const Trajectory tr = run(solver, std::span<const double>(&t, 1));
    CHECK(tr.max_bc_residual < 1e-9);
    CHECK(tr.shared_dual);
    CHECK(tr.kernel_diagnostics.samples_classified == tr.kernel_diagnostics.samples_checked);
}

TEST_CASE("run with one step equals one call of step") {
    const ProblemSpec p = gaussian_problem(-6.0, 24, 1, 0.1);
    const Solver solver(p);
    const double times[] = {0.0, 0.1};
    const Trajectory tr = run(solver, times);
    REQUIRE(tr.snapshots.size() == 2);
    const SolverState s = solver.step(solver.initial_state());
    CHECK(tr.snapshots[0].step == 0);
    CHECK(tr.snapshots[1].step == 1);
    CHECK(tr.snapshots[1].time == Approx(0.1));
    for (int i = 0; i < p.n_modes; ++i) {
        CHECK(tr.snapshots[1].u[i] == s.u_nodes[i]);
        CHECK(tr.snapshots[1].x[i] == Approx(6.0 * solver.rule().nodes[i]).scale(1.0));
        CHECK(tr.snapshots[0].u[i] == Approx(std::exp(-std::pow(tr.snapshots[0].x[i], 2))).scale(1.0));
    }
}

TEST_CASE("snapshot times are validated and rounded to steps") {
    const Solver solver(gaussian_problem(0.0, 16, 8, 1.0));
    const double bad[] = {1.5};
    CHECK_THROWS_AS(run(solver, bad), ConfigError);
    const double near[] = {0.26};
    const Trajectory tr = run(solver, near);
    REQUIRE(tr.snapshots.size() == 1);
    CHECK(tr.snapshots[0].step == 2);
    CHECK(tr.snapshots[0].time == Approx(0.25));
    CHECK(run(solver, {}).snapshots.empty());
}

TEST_CASE("non-finite values stop the run") {
    ProblemSpec p = gaussian_problem(0.0, 16, 4, 0.5);
    p.u0 = [](double x) { return std::abs(x) < 1.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
    const Solver solver(p);
    CHECK_THROWS_AS(solver.step(solver.initial_state()), NonFiniteError);
    const double t = 0.5;
    try {
        run(solver, std::span<const double>(&t, 1));
        FAIL("run should have thrown");
    } catch (const StepError& e) {
        CHECK(e.step() == 1);
    }
}
