#include "dtbc/tbc.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <fftw3.h>

#include "dtbc/errors.hpp"
#include "fftw_lock.hpp"

namespace dtbc {

namespace {

// In-place unnormalized inverse DFT: x_l <- sum_k x_k exp(+2 pi i k l / n).
void inverse_dft(std::vector<cplx>& data) {
    const int n = static_cast<int>(data.size());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

std::string describe(cplx z) {
    std::ostringstream s;
    s << std::setprecision(17) << "(" << z.real() << ", " << z.imag() << ")";
    return s.str();
}

}  // namespace

double characteristic_residual(cplx r, cplx z, double tau, double g_side) {
    return std::abs(z * tau * r * r * r + tau * g_side * r + z - 1.0);
}

RootTriple characteristic_roots(cplx z, double tau, double g_side) {
    if (!(tau > 0.0)) throw std::invalid_argument("characteristic_roots: tau must be positive");
    const cplx a = (z - 1.0) / (z * tau);
    const cplx p = g_side / z;
    const cplx disc = std::sqrt(a * a + (4.0 / 27.0) * p * p * p);
    const cplx g_plus = a + disc;
    const cplx g_minus = a - disc;
    const cplx big_g = std::abs(g_plus) >= std::abs(g_minus) ? g_plus : g_minus;
    const cplx zeta = -std::pow(big_g / 2.0, 1.0 / 3.0);
    if (std::abs(zeta) == 0.0) throw DegenerateError("characteristic_roots: zeta(z) = 0 at z = " + describe(z));

    const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    std::array<cplx, 3> r;
    cplx w = 1.0;
    for (auto& root : r) {
        root = w * zeta - g_side / (3.0 * z * w * zeta);
        for (int it = 0; it < 2; ++it) {
            const cplx f = z * tau * root * root * root + tau * g_side * root + z - 1.0;
            const cplx df = 3.0 * z * tau * root * root + tau * g_side;
            if (std::abs(df) == 0.0) break;
            root -= f / df;
        }
        w *= omega;
    }

    int negatives = 0;
    int neg_index = -1;
    for (int j = 0; j < 3; ++j) {
        if (r[j].real() < 0.0) {
            ++negatives;
            neg_index = j;
        }
    }
    if (negatives != 1) {
        std::ostringstream msg;
        msg << "characteristic_roots: " << negatives << " roots with negative real part at z = " << describe(z)
            << " (tau=" << tau << ", g=" << g_side << ")";
        throw ClassificationError(msg.str());
    }
    RootTriple out;
    out.z = z;
    out.r1 = r[neg_index];
    out.r2 = r[(neg_index + 1) % 3];
    out.r3 = r[(neg_index + 2) % 3];
    return out;
}

KernelSymbols kernel_symbols(const RootTriple& roots) {
    if (std::abs(roots.r1) == 0.0 || std::abs(roots.r2) == 0.0 || std::abs(roots.r3) == 0.0) {
        throw DegenerateError("kernel_symbols: zero characteristic root at z = " + describe(roots.z));
    }
    KernelSymbols s;
    s.s1 = 1.0 / roots.r2 + 1.0 / roots.r3;
    s.s2 = -1.0 / (roots.r2 * roots.r3);
    s.s4 = 1.0 / roots.r1;
    s.s3 = s.s4 * s.s4;
    return s;
}

InverseZResult inverse_z_from_samples(std::span<const cplx> samples, double radius, int n_taps) {
    const int n = static_cast<int>(samples.size());
    if (!(radius > 1.0)) throw std::invalid_argument("inverse_z_transform: radius must exceed 1");
    if (n_taps < 1 || n < 2 * n_taps) {
        throw std::invalid_argument("inverse_z_transform: need n_taps >= 1 and n_samples >= 2 n_taps");
    }
    std::vector<cplx> data(samples.begin(), samples.end());
    inverse_dft(data);
    InverseZResult out;
    out.taps.resize(n_taps);
    double scale = 1.0 / n;
    for (int l = 0; l < n_taps; ++l) {
        const cplx v = data[l] * scale;
        out.taps[l] = v.real();
        out.max_discarded_imag = std::max(out.max_discarded_imag, std::abs(v.imag()));
        scale *= radius;
    }
    out.tolerance_warning = out.max_discarded_imag > 1e-8;
    return out;
}

InverseZResult inverse_z_transform(const std::function<cplx(cplx)>& symbol, double radius, int n_samples,
                                   int n_taps) {
    std::vector<cplx> samples(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        samples[k] = symbol(std::polar(radius, 2.0 * std::numbers::pi * k / n_samples));
    }
    return inverse_z_from_samples(samples, radius, n_taps);
}

int default_sample_count(int m_max) {
    const auto per_step = static_cast<int>(std::ceil(std::abs(std::log(1e-7))));
    return static_cast<int>(std::bit_ceil(static_cast<unsigned>(m_max * per_step)));
}

double critical_radius(double tau, double g_side) {
    if (!(tau > 0.0)) throw std::invalid_argument("critical_radius: need tau > 0");
    const double a = tau * tau * g_side * g_side;
    const double b = tau * tau;
    if (a == 0.0) return 1.0;
    // With s = y^2 the ratio (1 + a s) / (1 + b s^3) peaks at the single positive
    // root of 2ab s^3 + 3b s^2 - a.
    const auto p = [a, b](double s) { return (2.0 * a * s + 3.0) * b * s * s - a; };
    double hi = 1.0;
    while (p(hi) < 0.0) hi *= 2.0;
    std::uintmax_t iterations = 200;
    const auto [lo_s, hi_s] = boost::math::tools::toms748_solve(p, 0.0, hi, boost::math::tools::eps_tolerance<double>(52),
                                                              iterations);
    const double s = 0.5 * (lo_s + hi_s);
    return std::sqrt((1.0 + a * s) / (1.0 + b * s * s * s));
}

TbcKernels build_kernels(double tau, double g_minus, double g_plus, int m_max, double c_radius, int n_samples) {
    if (!(tau > 0.0) || m_max < 1 || !(c_radius > 0.0)) {
        throw std::invalid_argument("build_kernels: need tau > 0, m_max >= 1, c_radius > 0");
    }
    TbcKernels k;
    k.tau = tau;
    k.g_minus = g_minus;
    k.g_plus = g_plus;
    k.radius = std::exp(c_radius * tau);
    k.n_samples = n_samples > 0 ? n_samples : default_sample_count(m_max);
    const int n = k.n_samples;

    std::array<std::vector<cplx>, 4> sym;
    for (auto& s : sym) s.resize(n);
    std::vector<double> poly_res(n, 0.0), vieta_res(n, 0.0);
    std::string failure;
    std::atomic<bool> failed{false};

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        if (failed) continue;
        try {
            const cplx z = std::polar(k.radius, 2.0 * std::numbers::pi * i / n);
            const RootTriple left = characteristic_roots(z, tau, g_minus);
            const RootTriple right = characteristic_roots(z, tau, g_plus);
            const KernelSymbols sl = kernel_symbols(left);
            const KernelSymbols sr = kernel_symbols(right);
            sym[0][i] = sl.s1;
            sym[1][i] = sl.s2;
            sym[2][i] = sr.s3;
            sym[3][i] = sr.s4;

            double pr = 0.0;
            double vr = 0.0;
            const cplx product = -(z - 1.0) / (z * tau);
            for (const auto* t : {&left, &right}) {
                const double g = t == &left ? g_minus : g_plus;
                for (cplx r : {t->r1, t->r2, t->r3}) pr = std::max(pr, characteristic_residual(r, z, tau, g));
                const double mag = std::abs(t->r1) + std::abs(t->r2) + std::abs(t->r3);
                vr = std::max(vr, std::abs(t->r1 * t->r2 * t->r3 - product) / std::max(std::abs(product), 1e-300));
                vr = std::max(vr, std::abs(t->r1 + t->r2 + t->r3) / mag);
            }
            poly_res[i] = pr;
            vieta_res[i] = vr;
        } catch (const Error& e) {
#pragma omp critical(dtbc_kernel_failure)
            {
                if (!failed) failure = e.what();
                failed = true;
            }
        }
    }
    if (failed) {
        const double rho = std::max(critical_radius(tau, g_minus), critical_radius(tau, g_plus));
        std::ostringstream msg;
        msg << "build_kernels: " << failure << "; contour radius " << std::setprecision(10) << k.radius
            << (k.radius <= rho ? " is not above" : " exceeds") << " the critical radius " << rho;
        throw ClassificationError(msg.str());
    }

    std::array<std::vector<double>*, 4> dest = {&k.y1, &k.y2, &k.y3, &k.y4};
    for (int s = 0; s < 4; ++s) {
        InverseZResult inv = inverse_z_from_samples(sym[s], k.radius, m_max + 1);
        *dest[s] = std::move(inv.taps);
        k.diagnostics.max_imag = std::max(k.diagnostics.max_imag, inv.max_discarded_imag);
    }
    k.y1_0 = k.y1[0];
    k.y2_0 = k.y2[0];
    k.y3_0 = k.y3[0];
    k.y4_0 = k.y4[0];
    k.diagnostics.max_poly_residual = *std::max_element(poly_res.begin(), poly_res.end());
    k.diagnostics.max_vieta_residual = *std::max_element(vieta_res.begin(), vieta_res.end());
    k.diagnostics.samples_checked = n;
    k.diagnostics.samples_classified = n;
    return k;
}

double kernel_self_convergence(const TbcKernels& k, double c_radius) {
    const TbcKernels fine = build_kernels(k.tau, k.g_minus, k.g_plus, k.m_max(), c_radius, 2 * k.n_samples);
    double delta = 0.0;
    for (int j = 0; j <= k.m_max(); ++j) {
        delta = std::max({delta, std::abs(fine.y1[j] - k.y1[j]), std::abs(fine.y2[j] - k.y2[j]),
                          std::abs(fine.y3[j] - k.y3[j]), std::abs(fine.y4[j] - k.y4[j])});
    }
    return delta;
}

void write_kernels_csv(std::ostream& out, const TbcKernels& k) {
    out << "j,Y1,Y2,Y3,Y4\n" << std::setprecision(17);
    for (int j = 0; j <= k.m_max(); ++j) {
        out << j << ',' << k.y1[j] << ',' << k.y2[j] << ',' << k.y3[j] << ',' << k.y4[j] << '\n';
    }
}

void BoundaryHistory::append(const BoundaryTraces& t) {
    u_left_.push_back(t.u_left);
    ux_left_.push_back(t.ux_left);
    uxx_left_.push_back(t.uxx_left);
    u_right_.push_back(t.u_right);
    ux_right_.push_back(t.ux_right);
    uxx_right_.push_back(t.uxx_right);
}

BoundaryTraces BoundaryHistory::operator[](int m) const {
    if (m < 0 || m >= size()) throw IndexError("BoundaryHistory: step index out of range");
    return {u_left_[m], ux_left_[m], uxx_left_[m], u_right_[m], ux_right_[m], uxx_right_[m]};
}

HistorySums history_rhs(const TbcKernels& kernels, const BoundaryHistory& history, int m) {
    if (m < 1) throw IndexError("history_rhs: m must be >= 1");
    if (history.size() < m) {
        throw IndexError("history_rhs: history holds " + std::to_string(history.size()) + " steps, need " +
                         std::to_string(m));
    }
    if (m > kernels.m_max()) throw IndexError("history_rhs: m exceeds the kernel length");
    const auto ux_l = history.ux_left();
    const auto uxx_l = history.uxx_left();
    const auto uxx_r = history.uxx_right();
    HistorySums h;
    for (int j = 1; j <= m; ++j) {
        const int past = m - j;
        h.h1 += kernels.y1[j] * ux_l[past] + kernels.y2[j] * uxx_l[past];
        h.h2 += kernels.y3[j] * uxx_r[past];
        h.h3 += kernels.y4[j] * uxx_r[past];
    }
    return h;
}

}  // namespace dtbc
