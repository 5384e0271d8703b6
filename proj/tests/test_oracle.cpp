#include <doctest.h>

#include <cmath>

#include "dtbc/solver.hpp"
#include "oracles/dense_collocation.hpp"

using namespace dtbc;

namespace {

double max_gap(const ProblemSpec& p) {
    const double t = p.t_final;
    const Trajectory tr = run(p, std::span<const double>(&t, 1));
    const oracle::DenseResult dense = oracle::dense_collocation_run(p);
    const Snapshot& s = tr.snapshots.back();
    double gap = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        CHECK(std::abs(s.x[i] - p.half_width * dense.nodes[i]) < 1e-12);
        gap = std::max(gap, std::abs(s.u[i] - dense.u[i]));
    }
    return gap;
}

ProblemSpec small_problem(Coefficient g, int n_modes, int n_steps) {
    ProblemSpec p;
    p.g = std::move(g);
    p.u0 = [](double x) { return std::exp(-x * x); };
    p.n_modes = n_modes;
    p.n_steps = n_steps;
    p.t_final = 0.5;
    return p;
}

}  // namespace

TEST_CASE("stepper matches the dense oracle, g = 0") {
    CHECK(max_gap(small_problem(constant_coefficient(0.0), 32, 64)) < 1e-7);
}

TEST_CASE("stepper matches the dense oracle with advection") {
    CHECK(max_gap(small_problem(constant_coefficient(6.0), 24, 32)) < 1e-7);
    CHECK(max_gap(small_problem(constant_coefficient(-6.0), 24, 32)) < 1e-7);
    CHECK(max_gap(small_problem(cosine_coefficient(), 24, 32)) < 1e-7);
}
