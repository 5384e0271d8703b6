#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dtbc/errors.hpp"
#include "dtbc/solver.hpp"

namespace dtbc {

/// Ai(x) for |x| <= 40: Maclaurin series for |x| < 2, Bessel connection formulas
/// (K_{1/3} for x >= 2, J_{1/3} and Y_{1/3} for x <= -2) beyond.
/// Throws RangeError outside that interval.
double airy_function(double x);

/// Options of the Airy convolution.
struct AiryExactOptions {
    /// u0 is treated as zero outside [-support, support].
    double support = 8.0;
    double abs_tolerance = 1e-9;
};

/// Exact g = 0 solution u(t, x) = int E(t, x - y) u0(y) dy with
/// E(t, x) = (3t)^{-1/3} Ai(x / (3t)^{1/3}).
/// Throws QuadratureError if the error estimate exceeds the tolerance.
double airy_exact(double t, double x, const std::function<double(double)>& u0, const AiryExactOptions& options = {});

struct FourierOptions {
    /// u0 is treated as zero outside [-support, support].
    double support = 8.0;
    /// Spectral cutoff: |u0_hat(k)| below this fraction of the peak counts as zero.
    double spectrum_floor = 1e-14;
    /// Tolerated relative energy in the top fifth of the resolved band,
    /// and relative amplitude in the outer tenth of the periodic window.
    double alias_tolerance = 1e-10;
};

/// Window and resolution picked by the Fourier oracle, for reporting.
struct FourierGrid {
    double length = 0.0;
    int n = 0;
    double k_cut = 0.0;
};

/// Exact constant-g solution u_hat(t, k) = exp(i (k^3 - g k) t) u0_hat(k),
/// computed on a periodic window much wider than the spread of u0 up to time t
/// and summed directly at the requested points.
/// Throws AliasWarning if the window or the resolution turns out too small.
std::vector<double> fourier_constant_g(double t, std::span<const double> x_points,
                                       const std::function<double(double)>& u0, double g,
                                       const FourierOptions& options = {}, FourierGrid* grid = nullptr);

/// Squared amplification factor (1 + tau^2 g^2 k^2) / (1 + tau^2 k^6) of one
/// split step for the Fourier mode k.
double amplification_factor(double g, double tau, int k);

enum class ErrorMode {
    /// ||u_ref - u||_2 / ||u_ref||_2 over the nodes.
    Normwise,
    /// sqrt(sum_i ((u_ref - u) / u_ref)^2) over nodes with |u_ref| >= 1e-10 max |u_ref|.
    Pointwise,
    /// ||u_ref - u||_2 over the nodes.
    Absolute,
};

struct ErrorReport {
    ErrorMode mode = ErrorMode::Normwise;
    std::vector<double> times;
    /// Spatial error err^m of every snapshot.
    std::vector<double> per_snapshot;
    /// sqrt(tau sum_m (err^m)^2).
    double l2_time = 0.0;
    /// Largest pointwise absolute difference over all snapshots.
    double max_abs = 0.0;
    int n_points = 0;
    /// Points dropped by the Pointwise guard, summed over snapshots.
    int excluded_points = 0;
};

/// Spatial and time-aggregated errors of `numeric` against `reference`.
/// Throws GridMismatchError unless both share times and nodes.
ErrorReport error_norms(std::span<const Snapshot> numeric, std::span<const Snapshot> reference, double tau,
                        ErrorMode mode = ErrorMode::Normwise);

}  // namespace dtbc
