#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dtbc/errors.hpp"
#include "dtbc/orthopoly.hpp"
#include "dtbc/petrov_galerkin.hpp"
#include "dtbc/tbc.hpp"

namespace dtbc {

/// Advection speed g(x) with its derivative, constant outside (-A, A).
struct Coefficient {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::string description;
};

Coefficient constant_coefficient(double g);

/// pi (1 + cos(pi (x + A) / (2A))) on [-A, A], extended by constants.
/// For A = 6 this is the profile pi (1 + cos(pi (x + 6) / 12)).
Coefficient cosine_coefficient(double half_width = 6.0);

/// u_t + g(x) u_x + u_xxx = 0 on [-A, A] with transparent boundaries.
struct ProblemSpec {
    double half_width = 6.0;
    Coefficient g = constant_coefficient(0.0);
    std::function<double(double)> u0;
    double t_final = 1.0;
    int n_steps = 1;
    int n_modes = 16;
    /// Contour radius parameter: r = exp(c_radius / n_steps), i.e. c_radius per unit of final time.
    double c_radius = 1.0;
};

/// Throws ConfigError if u0 or g' do not vanish at +-A, or parameters are invalid.
void validate(const ProblemSpec& spec);

/// The problem mapped to [-1, 1] by xi = x/A, s = t/A^3:
///   u_s + A^2 g(A xi) u_xi + u_xixixi = 0.
struct ScaledProblem {
    double half_width = 1.0;
    std::function<double(double)> g;
    std::function<double(double)> g_x;
    double g_minus = 0.0;
    double g_plus = 0.0;
    double t_final = 0.0;
    double tau = 0.0;

    double to_physical_x(double xi) const { return half_width * xi; }
    double to_physical_t(double s) const { return half_width * half_width * half_width * s; }
};

ScaledProblem scale_problem(const ProblemSpec& spec);

/// Nodal values of d^order u / dx^order (order 1 or 2) plus values at -1 and +1.
struct DerivativeValues {
    std::vector<double> nodes;
    double left = 0.0;
    double right = 0.0;
};

/// Termwise differentiation of a Legendre series; exact for polynomials.
DerivativeValues spectral_derivative(std::span<const double> legendre, const SpectralRule& rule, int order);

/// Legendre coefficients (length N + 1) of sum_j w_hat[j] phi_j + p2.
std::vector<double> reconstruct(std::span<const double> w_hat, const LiftingPolynomial& p2,
                                const PetrovGalerkinBasis& basis);

struct SolverState {
    int step = 0;
    std::vector<double> w_hat;
    LiftingPolynomial p2;
    std::vector<double> legendre;  // u^m as a Legendre series of degree N
    std::vector<double> u_nodes;
    std::vector<double> ux_nodes;
    BoundaryHistory history;
    /// Largest relative boundary-condition residual of the last step.
    double bc_residual = 0.0;
};

/// Step failure annotated with the step index.
class StepError : public Error {
public:
    StepError(int step, const std::string& what) : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

/// Everything that stays fixed across a run: rule, kernels, bases, factorized matrix.
class Solver {
public:
    explicit Solver(const ProblemSpec& spec);

    SolverState initial_state() const;

    /// One Lie-Trotter step: explicit advection, then implicit dispersion with
    /// the transparent boundary rows. Throws NonFiniteError on NaN/Inf.
    SolverState step(SolverState state) const;

    /// Residuals of B1 u = h1, B2 u = h2, B3 u = h3 relative to the larger of
    /// the terms involved and the size of u.
    std::array<double, 3> boundary_residuals(std::span<const double> legendre, const HistorySums& h) const;

    const ProblemSpec& spec() const { return spec_; }
    const ScaledProblem& scaled() const { return scaled_; }
    const SpectralRule& rule() const { return rule_; }
    const TbcKernels& kernels() const { return kernels_; }
    const PetrovGalerkinBasis& basis() const { return basis_; }
    const SystemMatrices& system() const { return system_; }
    /// Physical coordinates of the collocation nodes.
    std::vector<double> physical_nodes() const;

private:
    ProblemSpec spec_;
    ScaledProblem scaled_;
    SpectralRule rule_;
    TbcKernels kernels_;
    PetrovGalerkinBasis basis_;
    SystemMatrices system_;
    Eigen::MatrixXd vandermonde_;  // N x (N + 1)
    std::vector<double> g_nodes_;
    double g_right_ = 0.0;
    double gx_right_ = 0.0;
};

struct Snapshot {
    double time = 0.0;  // physical
    int step = 0;
    std::vector<double> x;  // physical collocation nodes
    std::vector<double> u;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    double max_bc_residual = 0.0;
    KernelDiagnostics kernel_diagnostics;
    bool shared_dual = false;
};

/// Steps n_steps times and records snapshots at the requested physical times
/// (each rounded to the nearest step).
Trajectory run(const ProblemSpec& spec, std::span<const double> snapshot_times);

/// Same, reusing an existing solver.
Trajectory run(const Solver& solver, std::span<const double> snapshot_times);

}  // namespace dtbc
