#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dtbc/orthopoly.hpp"
#include "dtbc/solver.hpp"
#include "dtbc/tbc.hpp"
#include "support.hpp"

using namespace dtbc;

namespace {

ProblemSpec random_problem(testing::Gen& gen) {
    ProblemSpec p;
    p.g = gen.integer(0, 3) == 0 ? cosine_coefficient() : constant_coefficient(gen.uniform(-8.0, 8.0));
    // Keeps |u0(+-6)| below 1e-12 and the profile resolved with 32 modes.
    const double centre = gen.uniform(-0.8, 0.8);
    const double width = gen.uniform(0.8, 0.95);
    p.u0 = [centre, width](double x) { return std::exp(-std::pow((x - centre) / width, 2)); };
    p.n_modes = 8 * gen.integer(4, 6);
    p.n_steps = gen.integer(4, 40);
    p.t_final = gen.uniform(0.05, 0.5);
    return p;
}

}  // namespace

TEST_CASE("property: quadrature exact for random products up to degree 2N-2") {
    testing::Gen gen(1);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = gen.integer(8, 40);
        const SpectralRule rule = build_rule(n);
        const int dp = gen.integer(0, 2 * n - 2);
        const int dq = gen.integer(0, 2 * n - 2 - dp);
        const auto p = gen.legendre_poly(dp);
        const auto q = gen.legendre_poly(dq);
        std::vector<double> pv, qv;
        for (double x : rule.nodes) {
            pv.push_back(legendre_series_eval(p, x));
            qv.push_back(legendre_series_eval(q, x));
        }
        const double d = legendre_series_endpoint(p, 1, 1) * legendre_series_endpoint(q, 1, 0) +
                         legendre_series_endpoint(p, 1, 0) * legendre_series_endpoint(q, 1, 1);
        const double exact = testing::legendre_l2_product(p, q);
        double scale = 0.0;
        for (std::size_t k = 0; k < std::min(p.size(), q.size()); ++k) scale += std::abs(p[k] * q[k]) * 2.0 / (2 * k + 1);
        CHECK(std::abs(discrete_inner_product(pv, qv, d, rule) - exact) < 1e-11 * std::max(scale, std::abs(exact)) + 1e-12);
    }
}

TEST_CASE("property: kernels are real and classified outside the critical radius") {
    testing::Gen gen(2);
    for (int trial = 0; trial < 12; ++trial) {
        const double tau = std::pow(10.0, gen.uniform(-7.0, -5.0));
        const double g_minus = gen.uniform(-300, 300);
        const double g_plus = gen.uniform(-300, 300);
        const int m = gen.integer(16, 128);
        const double rho = std::max(critical_radius(tau, g_minus), critical_radius(tau, g_plus));
        const double c = std::max(1.0 / (m * tau), std::log(1.001 * rho) / tau);
        const TbcKernels k = build_kernels(tau, g_minus, g_plus, m, c);
        CHECK(k.diagnostics.samples_classified == k.diagnostics.samples_checked);
        CHECK(k.diagnostics.max_imag < 1e-8);
    }
}

TEST_CASE("property: the stepper is linear and keeps the boundary rows") {
    testing::Gen gen(3);
    for (int trial = 0; trial < 8; ++trial) {
        const ProblemSpec p = random_problem(gen);
        ProblemSpec q = p;
        const double a = gen.uniform(-3.0, 3.0);
        q.u0 = [u0 = p.u0, a](double x) { return a * u0(x); };
        const double t = p.t_final;
        const Trajectory tp = run(p, std::span<const double>(&t, 1));
        const Trajectory tq = run(q, std::span<const double>(&t, 1));
        CHECK(tp.max_bc_residual < 1e-9);
        double peak = 0.0;
        for (double v : tp.snapshots[0].u) peak = std::max(peak, std::abs(v));
        for (std::size_t i = 0; i < tp.snapshots[0].u.size(); ++i) {
            CHECK(std::abs(tq.snapshots[0].u[i] - a * tp.snapshots[0].u[i]) < 1e-12 * (1.0 + std::abs(a)) * peak);
            CHECK(std::isfinite(tp.snapshots[0].u[i]));
        }
    }
}

TEST_CASE("property: pure dispersion does not gain energy") {
    testing::Gen gen(4);
    auto energy = [](const std::vector<double>& c) {
        return testing::legendre_l2_product(c, c);
    };
    for (int trial = 0; trial < 6; ++trial) {
        ProblemSpec p = random_problem(gen);
        p.g = constant_coefficient(0.0);
        // Coarse interpolants of these profiles are not resolved and the first
        // projection onto the boundary conditions can add energy.
        p.n_modes = 8 * gen.integer(7, 8);
        const Solver solver(p);
        SolverState s = solver.initial_state();
        double previous = energy(s.legendre);
        for (int m = 0; m < p.n_steps; ++m) {
            s = solver.step(std::move(s));
            const double e = energy(s.legendre);
            CHECK(e <= previous * (1.0 + 1e-10));
            previous = e;
        }
    }
}
