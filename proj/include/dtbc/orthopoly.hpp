#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dtbc {

/// Derivative of order `order` (0..3) of the Legendre polynomial L_k at x.
///
/// Values come from the three-term recurrence; derivatives from the
/// differentiated recurrence
///   L^{(d)}_{n+1} = ((2n+1)(x L^{(d)}_n + d L^{(d-1)}_n) - n L^{(d)}_{n-1}) / (n+1).
double legendre_eval(int k, double x, int order = 0);

/// L_0..L_{n_max} (or their `order`-th derivatives) at x.
std::vector<double> legendre_all(int n_max, double x, int order = 0);

/// Closed-form L_k, L_k' or L_k'' at x = side (side is -1 or +1).
double legendre_endpoint(int k, int side, int order);

/// Jacobi polynomial P_n^{(alpha,beta)}(x), normalized so P_n(1) = C(n+alpha, n).
double jacobi_eval(int n, double alpha, double beta, double x);

/// d/dx P_n^{(alpha,beta)}(x).
double jacobi_derivative(int n, double alpha, double beta, double x);

/// Ascending roots of P_n^{(2,1)} in (-1, 1).
///
/// Eigenvalues of the symmetric Jacobi matrix seed a Newton polish; throws
/// ConvergenceError if a root's Newton correction stays above 1e-13.
std::vector<double> jacobi21_roots(int n);

/// Generalized Gauss-Jacobi rule for third-order problems.
///
/// Nodes are x_1 = -1, the roots of P^{(2,1)}_{N-2}, and x_N = 1. The
/// discrete product is
///   (u,v)_N = sum_k w_k u(x_k) v(x_k) + w'_N d/dx(uv)(1),
/// exact whenever deg u + deg v <= 2N - 2.
struct SpectralRule {
    int n_points = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    double deriv_weight = 0.0;
};

/// Builds the N-point rule; N must be at least 8.
SpectralRule build_rule(int n_points);

/// (f,g)_N given nodal values and d/dx(fg) at x = 1.
///
/// The rule cannot differentiate nodal data, so the caller supplies the
/// derivative of the product at the right endpoint.
double discrete_inner_product(std::span<const double> f_nodes, std::span<const double> g_nodes,
                              double fg_deriv_at_right, const SpectralRule& rule);

// Legendre series u(x) = sum_k c[k] L_k(x).

double legendre_series_eval(std::span<const double> coeffs, double x);

/// Coefficients of u' (same length as the input, last entry zero).
std::vector<double> legendre_series_derivative(std::span<const double> coeffs);

/// u, u' or u'' at x = side via the closed-form endpoint values.
double legendre_series_endpoint(std::span<const double> coeffs, int side, int order);

/// V(i, k) = L_k(points[i]) for k < n_cols.
Eigen::MatrixXd legendre_vandermonde(std::span<const double> points, int n_cols);

}  // namespace dtbc
