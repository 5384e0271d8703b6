#include "dtbc/banded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dtbc/errors.hpp"

namespace dtbc {

BandedMatrix::BandedMatrix(int n, int lower, int upper)
    : n_(n), kl_(lower), ku_(upper), ldab_(2 * lower + upper + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

double BandedMatrix::operator()(int i, int j) const {
    if (!in_band(i, j)) return 0.0;
    return ab_[index(i, j)];
}

double& BandedMatrix::at(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || !in_band(i, j)) {
        throw std::out_of_range("BandedMatrix::at: entry outside the band");
    }
    return ab_[index(i, j)];
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - kl_);
        const int j1 = std::min(n_ - 1, i + ku_);
        for (int j = j0; j <= j1; ++j) y[i] += (*this)(i, j) * x[j];
    }
    return y;
}

Eigen::MatrixXd BandedMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) d(i, j) = (*this)(i, j);
    return d;
}

BandedLU::BandedLU(BandedMatrix a) : lu_(std::move(a)), pivots_(lu_.n_) {
    const int n = lu_.n_;
    const int kl = lu_.kl_;
    const int ku_fill = lu_.ku_ + kl;  // bandwidth of U after pivoting
    double scale = 0.0;
    for (double v : lu_.ab_) scale = std::max(scale, std::abs(v));

    for (int j = 0; j < n; ++j) {
        const int last_row = std::min(n - 1, j + kl);
        int p = j;
        for (int i = j + 1; i <= last_row; ++i)
            if (std::abs(lu_.raw(i, j)) > std::abs(lu_.raw(p, j))) p = i;
        pivots_[j] = p;
        if (!(std::abs(lu_.raw(p, j)) > 1e-14 * scale)) {
            std::ostringstream msg;
            msg << "BandedLU: singular matrix (zero pivot in column " << j << ")";
            throw SingularMatrixError(msg.str());
        }
        const int last_col = std::min(n - 1, j + ku_fill);
        if (p != j)
            for (int c = j; c <= last_col; ++c) std::swap(lu_.raw(j, c), lu_.raw(p, c));
        const double pivot = lu_.raw(j, j);
        for (int i = j + 1; i <= last_row; ++i) {
            const double l = lu_.raw(i, j) / pivot;
            lu_.raw(i, j) = l;
            if (l == 0.0) continue;
            for (int c = j + 1; c <= last_col; ++c) lu_.raw(i, c) -= l * lu_.raw(j, c);
        }
    }
}

std::vector<double> BandedLU::solve(std::span<const double> rhs) const {
    const int n = lu_.n_;
    const int kl = lu_.kl_;
    const int ku_fill = lu_.ku_ + kl;
    if (static_cast<int>(rhs.size()) != n) throw LengthError("BandedLU::solve: rhs length mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    for (int j = 0; j < n; ++j) {
        if (pivots_[j] != j) std::swap(x[j], x[pivots_[j]]);
        for (int i = j + 1; i <= std::min(n - 1, j + kl); ++i) x[i] -= lu_.raw(i, j) * x[j];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int c = i + 1; c <= std::min(n - 1, i + ku_fill); ++c) s -= lu_.raw(i, c) * x[c];
        x[i] = s / lu_.raw(i, i);
    }
    return x;
}

}  // namespace dtbc
