#pragma once

// Hand-rolled generators for the property tests. Every generator draws from a
// seeded engine so failures reproduce.

#include <cstdint>
#include <random>
#include <vector>

namespace dtbc::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    /// Legendre coefficients of a random polynomial of exact degree `degree`.
    std::vector<double> legendre_poly(int degree) {
        std::vector<double> c(degree + 1);
        for (auto& v : c) v = normal();
        if (c.back() == 0.0) c.back() = 1.0;
        return c;
    }

    std::vector<double> vector(int n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 engine_;
};

/// int_{-1}^{1} p q dx for Legendre coefficient vectors, by orthogonality.
inline double legendre_l2_product(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size() && k < q.size(); ++k) s += p[k] * q[k] * 2.0 / (2.0 * k + 1.0);
    return s;
}

}  // namespace dtbc::testing
