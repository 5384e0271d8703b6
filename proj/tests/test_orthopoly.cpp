#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dtbc/errors.hpp"
#include "dtbc/orthopoly.hpp"
#include "support.hpp"

using namespace dtbc;
using doctest::Approx;

TEST_CASE("legendre values and derivatives") {
    CHECK(legendre_eval(3, 0.5) == Approx(-0.4375).epsilon(1e-15));
    CHECK(legendre_eval(0, 0.3) == 1.0);
    CHECK(legendre_eval(1, 0.3) == Approx(0.3));
    CHECK(legendre_eval(5, -1.0, 1) == Approx(15.0));
    // L4'' = (105 x^2 - 15) / 2
    CHECK(legendre_eval(4, 0.2, 2) == Approx((105.0 * 0.04 - 15.0) / 2.0));
    // L5''' = (945 x^2 - 105) / 2
    CHECK(legendre_eval(5, 0.7, 3) == Approx((945.0 * 0.49 - 105.0) / 2.0));

    const auto all = legendre_all(6, 0.37, 1);
    for (int k = 0; k <= 6; ++k) CHECK(all[k] == Approx(legendre_eval(k, 0.37, 1)));
}

TEST_CASE("legendre endpoint closed forms agree with the recurrence") {
    CHECK(legendre_endpoint(4, -1, 1) == Approx(-10.0));
    CHECK(legendre_endpoint(3, 1, 2) == Approx(15.0));
    for (int k = 0; k <= 20; ++k) {
        for (int side : {-1, 1}) {
            for (int order = 0; order <= 2; ++order) {
                CHECK(legendre_endpoint(k, side, order) ==
                      Approx(legendre_eval(k, static_cast<double>(side), order)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("jacobi polynomials use the standard normalization") {
    // P_n^{(2,1)}(1) = C(n + 2, n)
    CHECK(jacobi_eval(3, 2.0, 1.0, 1.0) == Approx(10.0));
    CHECK(jacobi_eval(1, 2.0, 1.0, 0.0) == Approx(0.5));
    const double h = 1e-6;
    const double fd = (jacobi_eval(4, 2.0, 1.0, 0.3 + h) - jacobi_eval(4, 2.0, 1.0, 0.3 - h)) / (2 * h);
    CHECK(jacobi_derivative(4, 2.0, 1.0, 0.3) == Approx(fd).epsilon(1e-7));
}

TEST_CASE("roots of P^(2,1)") {
    const auto r1 = jacobi21_roots(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == Approx(-0.2).epsilon(1e-14));
    for (int n : {5, 14, 30, 62}) {
        const auto r = jacobi21_roots(n);
        REQUIRE(static_cast<int>(r.size()) == n);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(jacobi_eval(n, 2.0, 1.0, r[i])) < 1e-10 * jacobi_eval(n, 2.0, 1.0, 1.0));
            CHECK(r[i] > -1.0);
            CHECK(r[i] < 1.0);
            if (i > 0) CHECK(r[i] > r[i - 1]);
        }
    }
}

TEST_CASE("rule weights for N = 16") {
    const SpectralRule rule = build_rule(16);
    CHECK(rule.nodes.front() == -1.0);
    CHECK(rule.nodes.back() == 1.0);
    CHECK(rule.weights.front() == Approx(2.0 / 255.0).epsilon(1e-14));
    CHECK(rule.deriv_weight == Approx(-8.0 / (15.0 * 256.0 * 17.0)).epsilon(1e-14));
    CHECK(rule.deriv_weight == Approx(-1.2255e-4).epsilon(1e-4));
    const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
    CHECK(total == Approx(2.0).epsilon(1e-14));
    for (double w : rule.weights) CHECK(w > 0.0);
    CHECK_THROWS_AS(build_rule(7), std::invalid_argument);
}

TEST_CASE("discrete product is exact through degree 2N-2 and not beyond") {
    testing::Gen gen(11);
    for (int n : {8, 16, 24}) {
        const SpectralRule rule = build_rule(n);
        auto product = [&](const std::vector<double>& p, const std::vector<double>& q) {
            std::vector<double> pv, qv;
            for (double x : rule.nodes) {
                pv.push_back(legendre_series_eval(p, x));
                qv.push_back(legendre_series_eval(q, x));
            }
            const double d = legendre_series_endpoint(p, 1, 1) * legendre_series_endpoint(q, 1, 0) +
                             legendre_series_endpoint(p, 1, 0) * legendre_series_endpoint(q, 1, 1);
            return discrete_inner_product(pv, qv, d, rule);
        };
        const auto p = gen.legendre_poly(n);
        const auto q = gen.legendre_poly(n - 2);
        CHECK(product(p, q) == Approx(testing::legendre_l2_product(p, q)).epsilon(1e-12));
        // Degree 2N - 1 is not integrated exactly: L_N L_{N-1} has zero integral.
        std::vector<double> ln(n + 1, 0.0), lm(n, 0.0);
        ln[n] = 1.0;
        lm[n - 1] = 1.0;
        CHECK(std::abs(product(ln, lm)) > 1e-6);
    }
}

TEST_CASE("discrete product rejects mismatched lengths") {
    const SpectralRule rule = build_rule(8);
    std::vector<double> a(8, 1.0), b(7, 1.0);
    CHECK_THROWS_AS(discrete_inner_product(a, b, 0.0, rule), LengthError);
}

TEST_CASE("legendre series helpers") {
    // u = L3: u'(1) = 6, u''(1) = 15
    const std::vector<double> l3 = {0, 0, 0, 1};
    CHECK(legendre_series_endpoint(l3, 1, 1) == Approx(6.0));
    CHECK(legendre_series_endpoint(l3, 1, 2) == Approx(15.0));
    // x^2 = (L0 + 2 L2) / 3 -> derivative 2x = 2 L1
    const std::vector<double> x2 = {1.0 / 3.0, 0.0, 2.0 / 3.0};
    const auto d = legendre_series_derivative(x2);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == Approx(0.0).scale(1.0));
    CHECK(d[1] == Approx(2.0));
    CHECK(d[2] == Approx(0.0).scale(1.0));

    testing::Gen gen(3);
    const auto c = gen.legendre_poly(12);
    const auto v = legendre_vandermonde(std::vector<double>{-0.9, 0.1, 0.8}, 13);
    const double xs[] = {-0.9, 0.1, 0.8};
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int k = 0; k <= 12; ++k) s += v(i, k) * c[k];
        CHECK(s == Approx(legendre_series_eval(c, xs[i])).epsilon(1e-13));
    }
}

TEST_CASE("series derivative matches finite differences") {
    testing::Gen gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = gen.legendre_poly(gen.integer(3, 40));
        const auto d = legendre_series_derivative(c);
        const double x = gen.uniform(-0.95, 0.95);
        const double h = 1e-6;
        const double fd = (legendre_series_eval(c, x + h) - legendre_series_eval(c, x - h)) / (2 * h);
        double scale = 0.0;
        for (double v : c) scale += std::abs(v);
        CHECK(std::abs(legendre_series_eval(d, x) - fd) < 1e-6 * scale * c.size() * c.size());
    }
}
