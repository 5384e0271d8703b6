#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace dtbc {

using cplx = std::complex<double>;

/// Roots of z*tau*r^3 + tau*g*r + z - 1 = 0 at one contour point.
///
/// r1 is the unique root with negative real part (it decays to the right);
/// r2 and r3 have positive real part (they decay to the left).
struct RootTriple {
    cplx r1;
    cplx r2;
    cplx r3;
    cplx z;
};

/// Evaluates the Cardano formulas and classifies the roots by the sign of
/// their real part. Requires |z| > 1 and tau > 0.
///
/// Of the two square-root signs in G(z) the one with larger |G| is taken
/// (both give the same root set; the larger one avoids cancellation), and
/// each root gets two Newton corrections on the cubic.
/// Throws ClassificationError unless exactly one root has negative real
/// part, DegenerateError if zeta(z) vanishes.
RootTriple characteristic_roots(cplx z, double tau, double g_side);

/// |z tau r^3 + tau g r + z - 1| for one root.
double characteristic_residual(cplx r, cplx z, double tau, double g_side);

/// Smallest contour radius above which the classification holds.
///
/// A root crosses the imaginary axis, r = iy, exactly when
/// |z|^2 = (1 + tau^2 g^2 y^2) / (1 + tau^2 y^6), so the roots split one to two
/// on every circle |z| = rho with rho^2 above the supremum of that ratio over y.
/// The value is 1 for g = 0 and exceeds 1 for every g != 0.
double critical_radius(double tau, double g_side);

struct KernelSymbols {
    cplx s1;  // 1/r2 + 1/r3
    cplx s2;  // -1/(r2 r3)
    cplx s3;  // 1/r1^2
    cplx s4;  // 1/r1
};

KernelSymbols kernel_symbols(const RootTriple& roots);

struct InverseZResult {
    std::vector<double> taps;
    double max_discarded_imag = 0.0;
    /// Set when a discarded imaginary part exceeds 1e-8.
    bool tolerance_warning = false;
};

/// Trapezoidal inversion of a Z-transform on the circle |z| = radius:
/// u^l ~= radius^l * IDFT(U)(l), U_k = symbol(radius * exp(2 pi i k / n_samples)).
InverseZResult inverse_z_transform(const std::function<cplx(cplx)>& symbol, double radius,
                                   int n_samples, int n_taps);

/// Same inversion from precomputed samples on the circle.
InverseZResult inverse_z_from_samples(std::span<const cplx> samples, double radius, int n_taps);

/// Number of contour samples for m_max steps: m_max * ceil(|ln 1e-7|),
/// rounded up to a power of two.
int default_sample_count(int m_max);

struct KernelDiagnostics {
    double max_imag = 0.0;
    double max_poly_residual = 0.0;
    /// max over samples of the relative Vieta mismatch (product and sum of roots)
    double max_vieta_residual = 0.0;
    int samples_checked = 0;
    int samples_classified = 0;
};

/// Convolution kernels Y1..Y4 of the discrete transparent boundary conditions.
///
/// Y1, Y2 act at the left boundary (built with g_minus), Y3, Y4 at the right
/// boundary (built with g_plus). Each array has m_max + 1 taps.
struct TbcKernels {
    std::vector<double> y1, y2, y3, y4;
    double y1_0 = 0.0, y2_0 = 0.0, y3_0 = 0.0, y4_0 = 0.0;
    double radius = 1.0;
    int n_samples = 0;
    double tau = 0.0;
    double g_minus = 0.0;
    double g_plus = 0.0;
    KernelDiagnostics diagnostics;

    int m_max() const { return static_cast<int>(y1.size()) - 1; }
    std::array<double, 4> zeroth() const { return {y1_0, y2_0, y3_0, y4_0}; }
};

/// Samples the four symbols on |z| = exp(c_radius * tau) and inverts them.
///
/// n_samples = 0 selects default_sample_count(m_max). Symbol sampling runs
/// in parallel when OpenMP is available.
TbcKernels build_kernels(double tau, double g_minus, double g_plus, int m_max, double c_radius,
                         int n_samples = 0);

/// Largest per-tap change between `k` and a rebuild with twice the samples.
double kernel_self_convergence(const TbcKernels& k, double c_radius);

/// CSV with header j,Y1,Y2,Y3,Y4 and 17 significant digits.
void write_kernels_csv(std::ostream& out, const TbcKernels& k);

struct BoundaryTraces {
    double u_left = 0.0, ux_left = 0.0, uxx_left = 0.0;
    double u_right = 0.0, ux_right = 0.0, uxx_right = 0.0;
};

/// Boundary traces of every completed step, starting with the initial data.
class BoundaryHistory {
public:
    void append(const BoundaryTraces& t);
    int size() const { return static_cast<int>(u_left_.size()); }
    BoundaryTraces operator[](int m) const;

    std::span<const double> ux_left() const { return ux_left_; }
    std::span<const double> uxx_left() const { return uxx_left_; }
    std::span<const double> uxx_right() const { return uxx_right_; }

private:
    std::vector<double> u_left_, ux_left_, uxx_left_;
    std::vector<double> u_right_, ux_right_, uxx_right_;
};

struct HistorySums {
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
};

/// History parts of the boundary conditions at step m:
///   h1 = sum_{j=1}^m Y1^j u_x^{m-j}(-1) + Y2^j u_xx^{m-j}(-1)
///   h2 = sum_{j=1}^m Y3^j u_xx^{m-j}(1)
///   h3 = sum_{j=1}^m Y4^j u_xx^{m-j}(1)
/// Throws IndexError if fewer than m steps are recorded or m > m_max.
HistorySums history_rhs(const TbcKernels& kernels, const BoundaryHistory& history, int m);

}  // namespace dtbc
