#include "dtbc/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include "fftw_lock.hpp"

namespace dtbc {

namespace {

constexpr double pi = std::numbers::pi;

// Ai(0) and -Ai'(0).
constexpr long double airy_c1 = 0.355028053887817239372063026L;
constexpr long double airy_c2 = 0.258819403792806798405183560L;

// The series is used on [-7, 6). Beyond 6 its cancellation error (about Bi(x) eps)
// exceeds the truncation error of the decaying expansion; below -7 the
// oscillatory expansion is accurate to about 1e-13.
constexpr double airy_series_left = 7.0;
constexpr double airy_series_right = 6.0;

// Summed in long double: f and g grow like exp(2/3 |x|^{3/2}) while Ai does not, and
// the extra bits keep the cancellation in c1 f - c2 g below double rounding.
double airy_series(double x) {
    const long double xl = x;
    const long double x3 = xl * xl * xl;
    long double f = 1.0L;
    long double g = xl;
    long double tf = 1.0L;
    long double tg = xl;
    for (int k = 1; k < 200; ++k) {
        tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
        tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
        f += tf;
        g += tg;
        if (std::abs(tf) < 1e-21L * std::abs(f) && std::abs(tg) < 1e-21L * (std::abs(g) + 1e-300L)) break;
    }
    return static_cast<double>(airy_c1 * f - airy_c2 * g);
}

// Coefficients u_k of the large-argument expansions, truncated at the smallest term.
double airy_asymptotic(double x) {
    const double ax = std::abs(x);
    const double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
    if (x > 0.0) {
        double sum = 1.0;
        double term = 1.0;
        double u = 1.0;
        for (int k = 1; k < 60; ++k) {
            u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
            const double next = (k % 2 ? -u : u) / std::pow(zeta, k);
            if (std::abs(next) > std::abs(term)) break;
            term = next;
            sum += term;
        }
        return std::exp(-zeta) / (2.0 * std::sqrt(pi) * std::pow(ax, 0.25)) * sum;
    }
    double even = 0.0;
    double odd = 0.0;
    double u = 1.0;
    double last = 1.0;
    double zk = 1.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
            zk *= zeta;
        }
        const double term = u / zk;
        if (k > 0 && term > last) break;
        last = term;
        const double sign = (k / 2) % 2 ? -1.0 : 1.0;
        if (k % 2 == 0) {
            even += sign * term;
        } else {
            odd += sign * term;
        }
    }
    const double phase = zeta + pi / 4.0;
    return (std::sin(phase) * even - std::cos(phase) * odd) / (std::sqrt(pi) * std::pow(ax, 0.25));
}

// Ai on the whole line, without the range check.
double airy_unchecked(double x) {
    if (x >= -airy_series_left && x < airy_series_right) return airy_series(x);
    return airy_asymptotic(x);
}

void check_finite_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and non-negative");
}

}  // namespace

double airy_function(double x) {
    if (!(std::abs(x) <= 40.0)) {
        std::ostringstream msg;
        msg << "airy_function: |x| = " << std::abs(x) << " exceeds the validated range 40";
        throw RangeError(msg.str());
    }
    return airy_unchecked(x);
}

double airy_exact(double t, double x, const std::function<double(double)>& u0, const AiryExactOptions& options) {
    if (!(t > 0.0)) throw std::invalid_argument("airy_exact: t must be positive");
    const double scale = std::cbrt(3.0 * t);
    auto integrand = [&](double y) { return airy_unchecked((x - y) / scale) / scale * u0(y); };

    // Short panels keep the oscillatory tail of the kernel well sampled. Extra
    // breakpoints sit where the evaluation of Ai switches formula, so that no
    // panel straddles the (rounding-level) seam.
    const double s = options.support;
    const int panels = std::max(8, static_cast<int>(std::ceil(2.0 * s / std::min(1.0, 8.0 * scale))));
    std::vector<double> cuts;
    for (int p = 0; p <= panels; ++p) cuts.push_back(-s + 2.0 * s * p / panels);
    for (double seam : {x + airy_series_left * scale, x - airy_series_right * scale}) {
        if (seam > -s && seam < s) cuts.push_back(seam);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    double error = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        if (!(cuts[p + 1] > cuts[p])) continue;
        double e = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[p], cuts[p + 1], 12,
                                                                              1e-11, &e);
        error += e;
    }
    if (!(error <= options.abs_tolerance) || !std::isfinite(total)) {
        std::ostringstream msg;
        msg << "airy_exact: error estimate " << error << " above " << options.abs_tolerance << " at t=" << t
            << ", x=" << x;
        throw QuadratureError(msg.str());
    }
    return total;
}

namespace {

using cplx = std::complex<double>;

// Forward DFT of real samples: F_q = sum_j u_j exp(-2 pi i j q / n).
std::vector<cplx> forward_dft(const std::vector<double>& u) {
    const int n = static_cast<int>(u.size());
    std::vector<cplx> data(u.begin(), u.end());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
    return data;
}

std::vector<cplx> backward_dft(std::vector<cplx> data) {
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
    return data;
}

std::vector<double> sample_window(const std::function<double(double)>& u0, double support, double length, int n) {
    std::vector<double> u(n, 0.0);
    const double dx = length / n;
    for (int j = 0; j < n; ++j) {
        const double x = -length / 2.0 + j * dx;
        if (std::abs(x) <= support) u[j] = u0(x);
    }
    return u;
}

int signed_index(int q, int n) { return q <= n / 2 ? q : q - n; }

}  // namespace

std::vector<double> fourier_constant_g(double t, std::span<const double> x_points,
                                       const std::function<double(double)>& u0, double g,
                                       const FourierOptions& options, FourierGrid* grid) {
    check_finite_time(t);
    const double s = options.support;

    // Pass 1: spectral extent of u0 from a fine sampling of its support.
    const double l0 = 4.0 * s;
    const int n0 = 4096;
    const std::vector<cplx> f0 = forward_dft(sample_window(u0, s, l0, n0));
    double peak = 0.0;
    for (const auto& f : f0) peak = std::max(peak, std::abs(f));
    double k_cut = 0.0;
    for (int q = 0; q < n0; ++q) {
        if (std::abs(f0[q]) > options.spectrum_floor * peak) {
            k_cut = std::max(k_cut, 2.0 * pi * std::abs(signed_index(q, n0)) / l0);
        }
    }
    const double k_nyq0 = pi * n0 / l0;
    if (k_cut > 0.8 * k_nyq0) throw AliasWarning("fourier_constant_g: initial datum is not resolved by the sampling");
    k_cut = std::max(k_cut, 1.0);

    // Pass 2: a window wider than the travel of every resolved mode, Nyquist >= 2 k_cut.
    const double length = 4.0 * (2.0 * s + std::abs(g) * t + 3.0 * k_cut * k_cut * t);
    const int n = std::max(1024, static_cast<int>(std::bit_ceil(
                                     static_cast<unsigned>(std::ceil(2.0 * k_cut * length / pi)))));
    if (grid) *grid = {length, n, k_cut};

    std::vector<cplx> f = forward_dft(sample_window(u0, s, length, n));
    const double x0 = -length / 2.0;
    double total = 0.0;
    double high = 0.0;
    for (int q = 0; q < n; ++q) {
        const int qs = signed_index(q, n);
        const double k = 2.0 * pi * qs / length;
        if (qs == n / 2) {
            f[q] = 0.0;
            continue;
        }
        f[q] *= std::polar(1.0, (k * k * k - g * k) * t);
        const double e = std::norm(f[q]);
        total += e;
        if (std::abs(qs) > 0.8 * (n / 2)) high += e;
    }
    if (total > 0.0 && high > options.alias_tolerance * total) {
        throw AliasWarning("fourier_constant_g: energy near the Nyquist mode exceeds the tolerance");
    }

    // Wrap-around check on the full periodic solution.
    const std::vector<cplx> on_grid = backward_dft(f);
    double u_max = 0.0;
    double edge_max = 0.0;
    for (int j = 0; j < n; ++j) {
        const double v = std::abs(on_grid[j].real()) / n;
        u_max = std::max(u_max, v);
        if (std::abs(x0 + j * length / n) > 0.4 * length) edge_max = std::max(edge_max, v);
    }
    if (u_max > 0.0 && edge_max > options.alias_tolerance * u_max) {
        std::ostringstream msg;
        msg << "fourier_constant_g: solution reaches the edge of the periodic window (relative " << edge_max / u_max
            << ")";
        throw AliasWarning(msg.str());
    }

    // Direct trigonometric sum at the requested points; u is real so G_{-q} = conj(G_q).
    double coeff_peak = 0.0;
    for (const auto& c : f) coeff_peak = std::max(coeff_peak, std::abs(c));
    std::vector<double> out;
    out.reserve(x_points.size());
    for (double x : x_points) {
        double sum = f[0].real();
        for (int q = 1; q < n / 2; ++q) {
            if (std::abs(f[q]) < 1e-30 * coeff_peak) continue;
            const double k = 2.0 * pi * q / length;
            sum += 2.0 * (f[q] * std::polar(1.0, k * (x - x0))).real();
        }
        out.push_back(sum / n);
    }
    return out;
}

double amplification_factor(double g, double tau, int k) {
    if (!(tau > 0.0) || k < 0) throw std::invalid_argument("amplification_factor: need tau > 0 and k >= 0");
    const double kk = k;
    return (1.0 + tau * tau * g * g * kk * kk) / (1.0 + tau * tau * kk * kk * kk * kk * kk * kk);
}

ErrorReport error_norms(std::span<const Snapshot> numeric, std::span<const Snapshot> reference, double tau,
                        ErrorMode mode) {
    if (numeric.size() != reference.size()) throw GridMismatchError("error_norms: snapshot counts differ");
    ErrorReport r;
    r.mode = mode;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < numeric.size(); ++s) {
        const Snapshot& a = numeric[s];
        const Snapshot& b = reference[s];
        if (a.u.size() != b.u.size() || a.x.size() != b.x.size() || a.u.size() != a.x.size()) {
            throw GridMismatchError("error_norms: node counts differ");
        }
        if (std::abs(a.time - b.time) > 1e-12 * std::max(1.0, std::abs(b.time))) {
            throw GridMismatchError("error_norms: snapshot times differ");
        }
        for (std::size_t i = 0; i < a.x.size(); ++i) {
            if (std::abs(a.x[i] - b.x[i]) > 1e-12 * std::max(1.0, std::abs(b.x[i]))) {
                throw GridMismatchError("error_norms: node positions differ");
            }
        }
        r.n_points = static_cast<int>(a.u.size());
        double ref_max = 0.0;
        for (double v : b.u) ref_max = std::max(ref_max, std::abs(v));

        double num = 0.0;
        double den = 0.0;
        double pointwise = 0.0;
        for (std::size_t i = 0; i < a.u.size(); ++i) {
            const double d = b.u[i] - a.u[i];
            r.max_abs = std::max(r.max_abs, std::abs(d));
            num += d * d;
            den += b.u[i] * b.u[i];
            if (std::abs(b.u[i]) >= 1e-10 * ref_max && ref_max > 0.0) {
                pointwise += (d / b.u[i]) * (d / b.u[i]);
            } else {
                ++r.excluded_points;
            }
        }
        double e = 0.0;
        switch (mode) {
        case ErrorMode::Normwise:
            e = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
            break;
        case ErrorMode::Pointwise:
            e = std::sqrt(pointwise);
            break;
        case ErrorMode::Absolute:
            e = std::sqrt(num);
            break;
        }
        r.times.push_back(b.time);
        r.per_snapshot.push_back(e);
        sum_sq += e * e;
    }
    r.l2_time = std::sqrt(tau * sum_sq);
    return r;
}

}  // namespace dtbc
