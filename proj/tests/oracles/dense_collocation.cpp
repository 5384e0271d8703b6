#include "dense_collocation.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "dtbc/tbc.hpp"

namespace dtbc::oracle {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Clenshaw summation of sum_n c_n T_n(x).
double cheb_eval(const Vec& c, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (Eigen::Index n = c.size() - 1; n >= 1; --n) {
        const double b0 = 2.0 * x * b1 - b2 + c(n);
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + c(0);
}

Vec cheb_deriv(const Vec& c) {
    const Eigen::Index n = c.size();
    Vec d = Vec::Zero(n);
    for (Eigen::Index k = n - 1; k >= 1; --k) d(k - 1) = (k + 1 < n ? d(k + 1) : 0.0) + 2.0 * k * c(k);
    d(0) *= 0.5;
    return d;
}

Vec cheb_deriv(const Vec& c, int order) {
    Vec d = c;
    for (int i = 0; i < order; ++i) d = cheb_deriv(d);
    return d;
}

// Interior nodes: eigenvalues of the dense symmetric Jacobi matrix of P^{(2,1)}_n.
std::vector<double> interior_nodes(int n) {
    const double a = 2.0, b = 1.0;
    Mat j = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        j(k, k) = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
        if (k + 1 < n) {
            const double m = k + 1;
            const double t = 2.0 * m + a + b;
            const double off = std::sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0)));
            j(k, k + 1) = j(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(j);
    const Vec ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

struct Rule {
    std::vector<double> x;
    Vec w;
    double wd = 0.0;
};

// Weights from exactness on T_0..T_N (with the derivative term at x = 1).
Rule make_rule(int n) {
    Rule r;
    r.x.push_back(-1.0);
    for (double v : interior_nodes(n - 2)) r.x.push_back(v);
    r.x.push_back(1.0);
    Mat a(n + 1, n + 1);
    Vec rhs(n + 1);
    for (int j = 0; j <= n; ++j) {
        Vec e = Vec::Zero(j + 1);
        e(j) = 1.0;
        for (int k = 0; k < n; ++k) a(j, k) = cheb_eval(e, r.x[k]);
        a(j, n) = static_cast<double>(j) * j;  // T_j'(1)
        rhs(j) = j % 2 ? 0.0 : 2.0 / (1.0 - static_cast<double>(j) * j);
    }
    const Vec sol = a.colPivHouseholderQr().solve(rhs);
    r.w = sol.head(n);
    r.wd = sol(n);
    return r;
}

Vec unit(int n, int i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    return e;
}

}  // namespace

DenseResult dense_collocation_run(const ProblemSpec& spec) {
    validate(spec);
    const ScaledProblem s = scale_problem(spec);
    const int n = spec.n_modes;
    const int m_total = spec.n_steps;
    const double tau = s.tau;
    const TbcKernels k = build_kernels(tau, s.g_minus, s.g_plus, m_total, spec.c_radius / s.t_final);
    const double y1 = k.y1_0, y2 = k.y2_0, y3 = k.y3_0, y4 = k.y4_0;

    const Rule rule = make_rule(n);
    auto product = [&](const Vec& p, const Vec& q) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += rule.w(i) * cheb_eval(p, rule.x[i]) * cheb_eval(q, rule.x[i]);
        const Vec dp = cheb_deriv(p), dq = cheb_deriv(q);
        return v + rule.wd * (cheb_eval(dp, 1.0) * cheb_eval(q, 1.0) + cheb_eval(p, 1.0) * cheb_eval(dq, 1.0));
    };

    // Test space: degree <= N polynomials with the three dual conditions.
    Mat cons(3, n + 1);
    for (int j = 0; j <= n; ++j) {
        const Vec e = unit(n + 1, j);
        const Vec d1 = cheb_deriv(e), d2 = cheb_deriv(e, 2);
        cons(0, j) = cheb_eval(e, 1.0) - y4 * cheb_eval(d1, 1.0) + y3 * cheb_eval(d2, 1.0);
        cons(1, j) = cheb_eval(e, -1.0) + y2 * cheb_eval(d2, -1.0);
        cons(2, j) = cheb_eval(d1, -1.0) - y1 * cheb_eval(d2, -1.0);
    }
    const Mat tests = Eigen::FullPivLU<Mat>(cons).kernel();

    // Time-independent system matrix.
    Mat a(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
        const Vec e = unit(n + 1, j);
        const Vec d1 = cheb_deriv(e), d2 = cheb_deriv(e, 2), d3 = cheb_deriv(e, 3);
        a(0, j) = cheb_eval(e, -1.0) - y1 * cheb_eval(d1, -1.0) - y2 * cheb_eval(d2, -1.0);
        a(1, j) = cheb_eval(e, 1.0) - y3 * cheb_eval(d2, 1.0);
        a(2, j) = cheb_eval(d1, 1.0) - y4 * cheb_eval(d2, 1.0);
        const Vec op = e + tau * d3;
        for (int i = 0; i < tests.cols(); ++i) a(3 + i, j) = product(op, tests.col(i));
    }
    const Eigen::FullPivLU<Mat> lu(a);

    // Initial interpolant of degree N - 1.
    Mat v(n, n);
    Vec u0(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) v(i, j) = cheb_eval(unit(n, j), rule.x[i]);
        u0(i) = spec.u0(s.to_physical_x(rule.x[i]));
    }
    Vec c = Vec::Zero(n + 1);
    c.head(n) = v.partialPivLu().solve(u0);

    std::vector<double> ux_l, uxx_l, uxx_r;
    auto record = [&](const Vec& coef) {
        const Vec d1 = cheb_deriv(coef), d2 = cheb_deriv(coef, 2);
        ux_l.push_back(cheb_eval(d1, -1.0));
        uxx_l.push_back(cheb_eval(d2, -1.0));
        uxx_r.push_back(cheb_eval(d2, 1.0));
    };
    record(c);

    for (int m = 1; m <= m_total; ++m) {
        double h1 = 0.0, h2 = 0.0, h3 = 0.0;
        for (int j = 1; j <= m; ++j) {
            h1 += k.y1[j] * ux_l[m - j] + k.y2[j] * uxx_l[m - j];
            h2 += k.y3[j] * uxx_r[m - j];
            h3 += k.y4[j] * uxx_r[m - j];
        }
        const Vec d1 = cheb_deriv(c), d2 = cheb_deriv(c, 2);
        // f = u - tau g u_x is only known at the nodes and through f'(1).
        Vec f(n);
        for (int i = 0; i < n; ++i) f(i) = cheb_eval(c, rule.x[i]) - tau * s.g(rule.x[i]) * cheb_eval(d1, rule.x[i]);
        const double f1 = cheb_eval(c, 1.0) - tau * s.g(1.0) * cheb_eval(d1, 1.0);
        const double df1 = cheb_eval(d1, 1.0) - tau * (s.g_x(1.0) * cheb_eval(d1, 1.0) + s.g(1.0) * cheb_eval(d2, 1.0));

        Vec rhs(n + 1);
        rhs(0) = h1;
        rhs(1) = h2;
        rhs(2) = h3;
        for (int i = 0; i < tests.cols(); ++i) {
            const Vec t = tests.col(i);
            double val = 0.0;
            for (int q = 0; q < n; ++q) val += rule.w(q) * f(q) * cheb_eval(t, rule.x[q]);
            val += rule.wd * (df1 * cheb_eval(t, 1.0) + f1 * cheb_eval(cheb_deriv(t), 1.0));
            rhs(3 + i) = val;
        }
        c = lu.solve(rhs);
        record(c);
    }

    DenseResult out;
    out.nodes = rule.x;
    for (double x : rule.x) out.u.push_back(cheb_eval(c, x));
    return out;
}

}  // namespace dtbc::oracle
