#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dtbc {

/// Square banded matrix with `lower` sub- and `upper` super-diagonals.
///
/// Storage follows the LAPACK general-band layout with `lower` extra rows
/// reserved for fill-in, so the same object can be factorized in place.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(int n, int lower, int upper);

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

    /// Entry (i, j); zero outside the band.
    double operator()(int i, int j) const;

    /// Writable entry; (i, j) must lie inside the band.
    double& at(int i, int j);

    std::vector<double> multiply(std::span<const double> x) const;
    Eigen::MatrixXd to_dense() const;

private:
    friend class BandedLU;
    int index(int i, int j) const { return (kl_ + ku_ + i - j) + j * ldab_; }
    // Fill-in rows above the upper band are addressable only by the factorization.
    double& raw(int i, int j) { return ab_[index(i, j)]; }
    double raw(int i, int j) const { return ab_[index(i, j)]; }

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int ldab_ = 0;
    std::vector<double> ab_;
};

/// LU factorization with partial pivoting restricted to the band.
class BandedLU {
public:
    /// Factorizes a copy of `a`; throws SingularMatrixError on a zero pivot.
    explicit BandedLU(BandedMatrix a);

    std::vector<double> solve(std::span<const double> rhs) const;
    int size() const { return lu_.size(); }

private:
    BandedMatrix lu_;
    std::vector<int> pivots_;
};

}  // namespace dtbc
