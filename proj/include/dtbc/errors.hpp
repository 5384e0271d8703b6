#pragma once

#include <stdexcept>
#include <string>

namespace dtbc {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root finding or quadrature construction did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The number of characteristic roots with negative real part was not one.
class ClassificationError : public Error {
public:
    using Error::Error;
};

/// A characteristic root or derived quantity vanished.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A small boundary system (basis coefficients, lifting) is singular.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// The banded step matrix is singular.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// The sign-flipped trial coefficients do not define a member of the dual space.
class DualMismatchError : public Error {
public:
    using Error::Error;
};

/// A time step produced NaN or Inf.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Argument outside the validated range of a special function.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Numerical and reference snapshots are not on the same grid or times.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Array arguments of inconsistent length.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Boundary history too short for the requested step.
class IndexError : public Error {
public:
    using Error::Error;
};

/// The Fourier oracle's periodic window or resolution is too small.
class AliasWarning : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dtbc
