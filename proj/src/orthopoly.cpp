#include "dtbc/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dtbc/errors.hpp"

namespace dtbc {

namespace {

constexpr int kMaxNewton = 50;

// Runs the Legendre recurrence for value and derivatives up to `order`,
// returning the rows [order][k] for k = 0..n_max.
std::vector<std::vector<double>> legendre_derivative_table(int n_max, double x, int order) {
    std::vector<std::vector<double>> t(order + 1, std::vector<double>(n_max + 1, 0.0));
    t[0][0] = 1.0;
    if (n_max >= 1) {
        t[0][1] = x;
        if (order >= 1) t[1][1] = 1.0;
    }
    for (int n = 1; n < n_max; ++n) {
        for (int d = 0; d <= order; ++d) {
            const double lower = d > 0 ? t[d - 1][n] : 0.0;
            t[d][n + 1] = ((2.0 * n + 1.0) * (x * t[d][n] + d * lower) - n * t[d][n - 1]) / (n + 1.0);
        }
    }
    return t;
}

}  // namespace

double legendre_eval(int k, double x, int order) {
    if (k < 0 || order < 0 || order > 3) {
        throw std::invalid_argument("legendre_eval: need k >= 0 and order in 0..3");
    }
    return legendre_derivative_table(k, x, order)[order][k];
}

std::vector<double> legendre_all(int n_max, double x, int order) {
    return legendre_derivative_table(n_max, x, order)[order];
}

double legendre_endpoint(int k, int side, int order) {
    const double s = side < 0 ? -1.0 : 1.0;
    const double kk = k;
    switch (order) {
        case 0:
            return std::pow(s, k);
        case 1:
            return k == 0 ? 0.0 : std::pow(s, k - 1) * kk * (kk + 1.0) / 2.0;
        case 2:
            return std::pow(s, k) * (kk - 1.0) * kk * (kk + 1.0) * (kk + 2.0) / 8.0;
        default:
            throw std::invalid_argument("legendre_endpoint: order must be 0, 1 or 2");
    }
}

double jacobi_eval(int n, double alpha, double beta, double x) {
    if (n == 0) return 1.0;
    double p_prev = 1.0;
    double p = 0.5 * ((alpha + beta + 2.0) * x + (alpha - beta));
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + alpha + beta;
        const double a1 = 2.0 * k * (k + alpha + beta) * (s - 2.0);
        const double a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        const double a3 = (s - 2.0) * (s - 1.0) * s;
        const double a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s;
        const double next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    return p;
}

double jacobi_derivative(int n, double alpha, double beta, double x) {
    if (n == 0) return 0.0;
    return 0.5 * (n + alpha + beta + 1.0) * jacobi_eval(n - 1, alpha + 1.0, beta + 1.0, x);
}

std::vector<double> jacobi21_roots(int n) {
    if (n < 1) throw std::invalid_argument("jacobi21_roots: n must be >= 1");
    constexpr double alpha = 2.0;
    constexpr double beta = 1.0;

    // Symmetric Jacobi matrix of the monic recurrence (Golub-Welsch).
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + alpha + beta;
        diag(k) = k == 0 ? (beta - alpha) / (alpha + beta + 2.0)
                         : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + alpha + beta;
        const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta);
        const double den = s * s * (s + 1.0) * (s - 1.0);
        sub(k - 1) = std::sqrt(num / den);
    }
    std::vector<double> roots(n);
    if (n == 1) {
        roots[0] = diag(0);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
        eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        for (int k = 0; k < n; ++k) roots[k] = eig.eigenvalues()(k);
    }

    for (double& x : roots) {
        double step = 1.0;
        for (int it = 0; it < kMaxNewton && std::abs(step) > 1e-16; ++it) {
            step = jacobi_eval(n, alpha, beta, x) / jacobi_derivative(n, alpha, beta, x);
            x -= step;
        }
        if (!(std::abs(step) < 1e-13) || !(std::abs(x) < 1.0)) {
            std::ostringstream msg;
            msg << "jacobi21_roots: Newton polish stagnated for n=" << n << " near x=" << x
                << " (last correction " << step << ")";
            throw ConvergenceError(msg.str());
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

SpectralRule build_rule(int n_points) {
    if (n_points < 8) throw std::invalid_argument("build_rule: need at least 8 points");
    const int n = n_points;
    const double nd = n;
    SpectralRule rule;
    rule.n_points = n;
    rule.nodes.reserve(n);
    rule.nodes.push_back(-1.0);
    for (double x : jacobi21_roots(n - 2)) rule.nodes.push_back(x);
    rule.nodes.push_back(1.0);

    rule.weights.assign(n, 0.0);
    const double scale = 4.0 / (nd * nd - 1.0) * std::pow((2.0 * nd + 1.0) / (nd + 2.0), 2);
    for (int k = 1; k < n - 1; ++k) {
        const double x = rule.nodes[k];
        const double p = jacobi_eval(n - 1, 2.0, 1.0, x);
        rule.weights[k] = scale / ((1.0 - x) * p * p);
    }
    const double tail = 8.0 / ((nd - 1.0) * nd * nd * (nd + 1.0));
    double inv_gaps = 0.0;
    for (int k = 0; k < n - 1; ++k) inv_gaps += 1.0 / (1.0 - rule.nodes[k]);
    rule.weights[0] = 2.0 / (nd * nd - 1.0);
    rule.weights[n - 1] = 4.0 / (nd * nd) + tail * inv_gaps;
    rule.deriv_weight = -tail;
    return rule;
}

double discrete_inner_product(std::span<const double> f_nodes, std::span<const double> g_nodes,
                              double fg_deriv_at_right, const SpectralRule& rule) {
    const auto n = static_cast<std::size_t>(rule.n_points);
    if (f_nodes.size() != n || g_nodes.size() != n) {
        throw LengthError("discrete_inner_product: nodal arrays must have length N");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += rule.weights[k] * f_nodes[k] * g_nodes[k];
    return sum + rule.deriv_weight * fg_deriv_at_right;
}

double legendre_series_eval(std::span<const double> coeffs, double x) {
    double sum = 0.0;
    double l_prev = 0.0;
    double l = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        sum += coeffs[k] * l;
        const double next = ((2.0 * k + 1.0) * x * l - k * l_prev) / (k + 1.0);
        l_prev = l;
        l = next;
    }
    return sum;
}

std::vector<double> legendre_series_derivative(std::span<const double> coeffs) {
    const int n = static_cast<int>(coeffs.size());
    std::vector<double> d(n, 0.0);
    // d_{k-1} = (2k-1) (c_k + d_{k+1} / (2k+3))
    for (int k = n - 1; k >= 1; --k) {
        const double next = k + 1 < n ? d[k + 1] / (2.0 * k + 3.0) : 0.0;
        d[k - 1] = (2.0 * k - 1.0) * (coeffs[k] + next);
    }
    return d;
}

double legendre_series_endpoint(std::span<const double> coeffs, int side, int order) {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        sum += coeffs[k] * legendre_endpoint(static_cast<int>(k), side, order);
    }
    return sum;
}

Eigen::MatrixXd legendre_vandermonde(std::span<const double> points, int n_cols) {
    Eigen::MatrixXd v(static_cast<Eigen::Index>(points.size()), n_cols);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double l_prev = 0.0;
        double l = 1.0;
        for (int k = 0; k < n_cols; ++k) {
            v(static_cast<Eigen::Index>(i), k) = l;
            const double next = ((2.0 * k + 1.0) * points[i] * l - k * l_prev) / (k + 1.0);
            l_prev = l;
            l = next;
        }
    }
    return v;
}

}  // namespace dtbc
