#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dtbc/banded.hpp"
#include "dtbc/orthopoly.hpp"

namespace dtbc {

/// Zeroth kernel taps (Y1^0, Y2^0, Y3^0, Y4^0) defining the boundary operators
///   B1 u = u(-1) - Y1^0 u'(-1) - Y2^0 u''(-1)
///   B2 u = u(1)  - Y3^0 u''(1)
///   B3 u = u'(1) - Y4^0 u''(1)
/// of the trial space and the dual operators
///   D1 v = v(1)  - Y4^0 v'(1) + Y3^0 v''(1)
///   D2 v = v(-1) + Y2^0 v''(-1)
///   D3 v = v'(-1) - Y1^0 v''(-1)
/// of the test space.
using BoundaryTaps = std::array<double, 4>;

/// Coefficients of L_{k+1}, L_{k+2}, L_{k+3} in a basis function
/// L_k + alpha L_{k+1} + beta L_{k+2} + gamma L_{k+3}.
struct BasisCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// B1, B2, B3 applied to a Legendre series, relative to the size of the terms.
std::array<double, 3> trial_condition_residuals(std::span<const double> legendre, const BoundaryTaps& y0);

/// D1, D2, D3 applied to a Legendre series, relative to the size of the terms.
std::array<double, 3> dual_condition_residuals(std::span<const double> legendre, const BoundaryTaps& y0);

/// Trial coefficients of phi_k from B1 = B2 = B3 = 0.
BasisCoefficients trial_coefficients(int k, const BoundaryTaps& y0);

/// Test coefficients of psi_k from D1 = D2 = D3 = 0 (leading L_k coefficient 1).
BasisCoefficients dual_coefficients(int k, const BoundaryTaps& y0);

/// Trial coefficients, checked against the sign-flipped test function
/// psi_k = L_k - alpha L_{k+1} + beta L_{k+2} - gamma L_{k+3}.
///
/// Throws DualMismatchError if psi_k misses the dual conditions by more
/// than 1e-8. That happens whenever Y1^0 != -Y4^0 or Y2^0 != -Y3^0, i.e.
/// for nonzero advection speeds at the boundaries; build_basis therefore
/// solves for the test coefficients separately.
BasisCoefficients basis_coefficients(int k, const BoundaryTaps& y0);

/// Trial and test bases of dimension N - 2 with their values on the rule nodes.
struct PetrovGalerkinBasis {
    int n = 0;
    BoundaryTaps y0{};
    std::vector<BasisCoefficients> trial;
    std::vector<BasisCoefficients> dual;
    /// True when every dual coefficient set equals the sign-flipped trial set.
    bool shared_dual = false;

    Eigen::MatrixXd phi_at_nodes;  // (N-2) x N
    Eigen::MatrixXd psi_at_nodes;  // (N-2) x N
    /// phi_k and its first two derivatives at -1 (columns 0..2) and +1 (columns 3..5).
    Eigen::MatrixXd phi_boundary;  // (N-2) x 6
    Eigen::MatrixXd psi_boundary;  // (N-2) x 6

    int size() const { return n - 2; }

    /// Legendre coefficients (length N + 1) of phi_k or psi_k.
    std::vector<double> phi_legendre(int k) const;
    std::vector<double> psi_legendre(int k) const;
};

PetrovGalerkinBasis build_basis(const SpectralRule& rule, const BoundaryTaps& y0);

/// Diagonal stiffness S[j] = (phi_j''', psi_j) = 2 (2j+3)(2j+5) gamma_j.
std::vector<double> assemble_stiffness(const PetrovGalerkinBasis& basis);

/// Seven-diagonal mass matrix M(j, k) = (phi_j, psi_k).
///
/// Exact Legendre orthogonality for j + k + 6 <= 2N - 2; the discrete
/// product (with its endpoint-derivative term) for the remaining entries
/// (N-4, N-3), (N-3, N-4), (N-3, N-3).
BandedMatrix assemble_mass(const PetrovGalerkinBasis& basis, const SpectralRule& rule);

/// Matrices of the step system. Row k of `combined` is the test against
/// psi_k, so combined(k, j) = M(j, k) + tau S(j, k), i.e. (M + tau S)^T.
struct SystemMatrices {
    BandedMatrix mass;
    std::vector<double> stiffness;
    double tau = 0.0;
    BandedMatrix combined;
    BandedLU factorized;
};

SystemMatrices assemble_system(const PetrovGalerkinBasis& basis, const SpectralRule& rule, double tau);

/// Solves the step system for the trial coefficients.
std::vector<double> solve_step_system(const SystemMatrices& system, std::span<const double> rhs);

/// p(x) = c0 + c1 x + c2 x^2.
struct LiftingPolynomial {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double value(double x) const { return c0 + (c1 + c2 * x) * x; }
    double derivative(double x) const { return c1 + 2.0 * c2 * x; }
    double second_derivative() const { return 2.0 * c2; }
    /// Legendre coefficients (length 3).
    std::array<double, 3> legendre() const { return {c0 + c2 / 3.0, c1, 2.0 * c2 / 3.0}; }
};

/// Quadratic with B1 p = h1, B2 p = h2, B3 p = h3.
LiftingPolynomial lifting(double h1, double h2, double h3, const BoundaryTaps& y0);

/// Data of the explicit half step at x = 1 needed for the derivative term of (.,.)_N.
struct RightEndpointData {
    double u = 0.0;
    double ux = 0.0;
    double uxx = 0.0;
    double g = 0.0;
    double gx = 0.0;
};

/// Component k = (psi_k, f)_N for nodal f, given f'(1).
std::vector<double> assemble_rhs(std::span<const double> f_nodes, double f_deriv_at_right,
                                 const PetrovGalerkinBasis& basis, const SpectralRule& rule);

/// Component k = (psi_k, u - tau g u_x - p2)_N.
///
/// f'(1) = u'(1) - tau (g'(1) u'(1) + g(1) u''(1)) - p2'(1) from the
/// endpoint data.
std::vector<double> assemble_rhs(std::span<const double> u_prev_nodes, std::span<const double> u_prev_x_nodes,
                                 std::span<const double> g_nodes, const RightEndpointData& right, double tau,
                                 const LiftingPolynomial& p2, const PetrovGalerkinBasis& basis,
                                 const SpectralRule& rule);

}  // namespace dtbc
