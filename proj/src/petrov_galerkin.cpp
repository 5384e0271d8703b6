#include "dtbc/petrov_galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dtbc/errors.hpp"

namespace dtbc {

namespace {

// A boundary operator as weights on (u, u', u'') at one endpoint.
struct EndpointOperator {
    int side;
    std::array<double, 3> w;
};

std::array<EndpointOperator, 3> trial_operators(const BoundaryTaps& y) {
    return {{{-1, {1.0, -y[0], -y[1]}}, {1, {1.0, 0.0, -y[2]}}, {1, {0.0, 1.0, -y[3]}}}};
}

std::array<EndpointOperator, 3> dual_operators(const BoundaryTaps& y) {
    return {{{1, {1.0, -y[3], y[2]}}, {-1, {1.0, 0.0, y[1]}}, {-1, {0.0, 1.0, -y[0]}}}};
}

double apply(const EndpointOperator& op, int degree) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += op.w[d] * legendre_endpoint(degree, op.side, d);
    return s;
}

double apply_magnitude(const EndpointOperator& op, int degree) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += std::abs(op.w[d] * legendre_endpoint(degree, op.side, d));
    return s;
}

std::array<double, 3> residuals(std::span<const double> c, const std::array<EndpointOperator, 3>& ops) {
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) {
        double v = 0.0;
        double scale = 0.0;
        for (std::size_t n = 0; n < c.size(); ++n) {
            if (c[n] == 0.0) continue;
            v += c[n] * apply(ops[i], static_cast<int>(n));
            scale += std::abs(c[n]) * apply_magnitude(ops[i], static_cast<int>(n));
        }
        r[i] = scale > 0.0 ? std::abs(v) / scale : 0.0;
    }
    return r;
}

BasisCoefficients solve_coefficients(int k, const std::array<EndpointOperator, 3>& ops, const char* what) {
    if (k < 0) throw std::invalid_argument("basis coefficients: k must be >= 0");
    Eigen::Matrix3d a;
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a(i, j) = apply(ops[i], k + 1 + j);
        b(i) = -apply(ops[i], k);
    }
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(a);
    if (!(lu.rcond() > 1e-13)) {
        std::ostringstream msg;
        msg << what << ": singular 3x3 boundary system for k=" << k << " (rcond " << lu.rcond() << ")";
        throw SingularSystemError(msg.str());
    }
    const Eigen::Vector3d x = lu.solve(b);
    return {x(0), x(1), x(2)};
}

std::vector<double> expand(int k, const BasisCoefficients& c, int length, double sign) {
    std::vector<double> v(length, 0.0);
    v[k] = 1.0;
    v[k + 1] = sign * c.alpha;
    v[k + 2] = c.beta;
    v[k + 3] = sign * c.gamma;
    return v;
}

}  // namespace

std::array<double, 3> trial_condition_residuals(std::span<const double> legendre, const BoundaryTaps& y0) {
    return residuals(legendre, trial_operators(y0));
}

std::array<double, 3> dual_condition_residuals(std::span<const double> legendre, const BoundaryTaps& y0) {
    return residuals(legendre, dual_operators(y0));
}

BasisCoefficients trial_coefficients(int k, const BoundaryTaps& y0) {
    return solve_coefficients(k, trial_operators(y0), "trial_coefficients");
}

BasisCoefficients dual_coefficients(int k, const BoundaryTaps& y0) {
    return solve_coefficients(k, dual_operators(y0), "dual_coefficients");
}

BasisCoefficients basis_coefficients(int k, const BoundaryTaps& y0) {
    const BasisCoefficients c = trial_coefficients(k, y0);
    const std::vector<double> psi = expand(k, c, k + 4, -1.0);
    const auto r = dual_condition_residuals(psi, y0);
    const double worst = *std::max_element(r.begin(), r.end());
    if (worst > 1e-8) {
        std::ostringstream msg;
        msg << "basis_coefficients: sign-flipped psi_" << k << " violates the dual conditions (relative residual "
            << worst << "); Y0 = (" << y0[0] << ", " << y0[1] << ", " << y0[2] << ", " << y0[3] << ")";
        throw DualMismatchError(msg.str());
    }
    return c;
}

std::vector<double> PetrovGalerkinBasis::phi_legendre(int k) const { return expand(k, trial[k], n + 1, 1.0); }

std::vector<double> PetrovGalerkinBasis::psi_legendre(int k) const { return expand(k, dual[k], n + 1, 1.0); }

PetrovGalerkinBasis build_basis(const SpectralRule& rule, const BoundaryTaps& y0) {
    PetrovGalerkinBasis b;
    b.n = rule.n_points;
    b.y0 = y0;
    const int dim = b.n - 2;
    b.trial.resize(dim);
    b.dual.resize(dim);
    b.shared_dual = true;
    for (int k = 0; k < dim; ++k) {
        b.trial[k] = trial_coefficients(k, y0);
        b.dual[k] = dual_coefficients(k, y0);
        const auto& t = b.trial[k];
        const auto& d = b.dual[k];
        const double scale = 1.0 + std::abs(t.alpha) + std::abs(t.beta) + std::abs(t.gamma);
        const double gap = std::abs(d.alpha + t.alpha) + std::abs(d.beta - t.beta) + std::abs(d.gamma + t.gamma);
        if (gap > 1e-8 * scale) b.shared_dual = false;
        if (t.gamma == 0.0) {
            throw SingularSystemError("build_basis: gamma_" + std::to_string(k) + " vanishes; stiffness is singular");
        }
    }

    const Eigen::MatrixXd vand = legendre_vandermonde(rule.nodes, b.n + 1);
    b.phi_at_nodes.resize(dim, b.n);
    b.psi_at_nodes.resize(dim, b.n);
    b.phi_boundary.resize(dim, 6);
    b.psi_boundary.resize(dim, 6);
    for (int k = 0; k < dim; ++k) {
        const auto phi = b.phi_legendre(k);
        const auto psi = b.psi_legendre(k);
        const Eigen::Map<const Eigen::VectorXd> phi_v(phi.data(), b.n + 1);
        const Eigen::Map<const Eigen::VectorXd> psi_v(psi.data(), b.n + 1);
        b.phi_at_nodes.row(k) = (vand * phi_v).transpose();
        b.psi_at_nodes.row(k) = (vand * psi_v).transpose();
        for (int d = 0; d < 3; ++d) {
            b.phi_boundary(k, d) = legendre_series_endpoint(phi, -1, d);
            b.phi_boundary(k, 3 + d) = legendre_series_endpoint(phi, 1, d);
            b.psi_boundary(k, d) = legendre_series_endpoint(psi, -1, d);
            b.psi_boundary(k, 3 + d) = legendre_series_endpoint(psi, 1, d);
        }
    }
    return b;
}

std::vector<double> assemble_stiffness(const PetrovGalerkinBasis& basis) {
    std::vector<double> s(basis.size());
    for (int j = 0; j < basis.size(); ++j) {
        s[j] = 2.0 * (2.0 * j + 3.0) * (2.0 * j + 5.0) * basis.trial[j].gamma;
    }
    return s;
}

BandedMatrix assemble_mass(const PetrovGalerkinBasis& basis, const SpectralRule& rule) {
    const int dim = basis.size();
    const int n = basis.n;
    BandedMatrix m(dim, 3, 3);
    std::vector<double> phi_nodes(n), psi_nodes(n);
    for (int j = 0; j < dim; ++j) {
        const auto phi = basis.phi_legendre(j);
        for (int k = std::max(0, j - 3); k <= std::min(dim - 1, j + 3); ++k) {
            if (j + k + 6 <= 2 * n - 2) {
                const auto psi = basis.psi_legendre(k);
                double s = 0.0;
                for (int i = std::max(j, k); i <= std::min(j, k) + 3; ++i) s += phi[i] * psi[i] * 2.0 / (2.0 * i + 1.0);
                m.at(j, k) = s;
            } else {
                for (int i = 0; i < n; ++i) {
                    phi_nodes[i] = basis.phi_at_nodes(j, i);
                    psi_nodes[i] = basis.psi_at_nodes(k, i);
                }
                const double d = basis.phi_boundary(j, 4) * basis.psi_boundary(k, 3) +
                                 basis.phi_boundary(j, 3) * basis.psi_boundary(k, 4);
                m.at(j, k) = discrete_inner_product(phi_nodes, psi_nodes, d, rule);
            }
        }
    }
    return m;
}

SystemMatrices assemble_system(const PetrovGalerkinBasis& basis, const SpectralRule& rule, double tau) {
    BandedMatrix mass = assemble_mass(basis, rule);
    std::vector<double> stiffness = assemble_stiffness(basis);
    const int dim = basis.size();
    BandedMatrix combined(dim, 3, 3);
    for (int k = 0; k < dim; ++k) {
        for (int j = std::max(0, k - 3); j <= std::min(dim - 1, k + 3); ++j) {
            combined.at(k, j) = mass(j, k) + (j == k ? tau * stiffness[j] : 0.0);
        }
    }
    BandedLU lu(combined);
    return SystemMatrices{std::move(mass), std::move(stiffness), tau, std::move(combined), std::move(lu)};
}

std::vector<double> solve_step_system(const SystemMatrices& system, std::span<const double> rhs) {
    return system.factorized.solve(rhs);
}

LiftingPolynomial lifting(double h1, double h2, double h3, const BoundaryTaps& y0) {
    Eigen::Matrix3d a;
    a << 1.0, -1.0 - y0[0], 1.0 + 2.0 * y0[0] - 2.0 * y0[1],  //
        1.0, 1.0, 1.0 - 2.0 * y0[2],                           //
        0.0, 1.0, 2.0 - 2.0 * y0[3];
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(a);
    if (!(lu.rcond() > 1e-13)) throw SingularSystemError("lifting: singular boundary system");
    const Eigen::Vector3d c = lu.solve(Eigen::Vector3d(h1, h2, h3));
    return {c(0), c(1), c(2)};
}

std::vector<double> assemble_rhs(std::span<const double> f_nodes, double f_deriv_at_right,
                                 const PetrovGalerkinBasis& basis, const SpectralRule& rule) {
    const int n = rule.n_points;
    if (static_cast<int>(f_nodes.size()) != n || basis.n != n) {
        throw LengthError("assemble_rhs: nodal data, basis and rule must share N");
    }
    const double f_right = f_nodes[n - 1];
    std::vector<double> rhs(basis.size());
    for (int k = 0; k < basis.size(); ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += rule.weights[i] * basis.psi_at_nodes(k, i) * f_nodes[i];
        const double d = basis.psi_boundary(k, 4) * f_right + basis.psi_boundary(k, 3) * f_deriv_at_right;
        rhs[k] = s + rule.deriv_weight * d;
    }
    return rhs;
}

std::vector<double> assemble_rhs(std::span<const double> u_prev_nodes, std::span<const double> u_prev_x_nodes,
                                 std::span<const double> g_nodes, const RightEndpointData& right, double tau,
                                 const LiftingPolynomial& p2, const PetrovGalerkinBasis& basis,
                                 const SpectralRule& rule) {
    const int n = rule.n_points;
    if (static_cast<int>(u_prev_nodes.size()) != n || static_cast<int>(u_prev_x_nodes.size()) != n ||
        static_cast<int>(g_nodes.size()) != n) {
        throw LengthError("assemble_rhs: nodal arrays must have length N");
    }
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        f[i] = u_prev_nodes[i] - tau * g_nodes[i] * u_prev_x_nodes[i] - p2.value(rule.nodes[i]);
    }
    const double df = right.ux - tau * (right.gx * right.ux + right.g * right.uxx) - p2.derivative(1.0);
    return assemble_rhs(f, df, basis, rule);
}

}  // namespace dtbc
