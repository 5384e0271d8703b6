#pragma once

#include <vector>

#include "dtbc/solver.hpp"

namespace dtbc::oracle {

struct DenseResult {
    std::vector<double> nodes;  // scaled collocation nodes
    std::vector<double> u;      // u^m at the nodes after the last step
};

/// The same fully discrete scheme written without the banded Legendre machinery:
/// u^m is a Chebyshev series of degree N fixed by the three transparent boundary
/// rows and N - 2 Galerkin rows (u + tau u''' - f, v)_N = 0 against a nullspace
/// basis of the dual conditions. Quadrature weights come from moment equations.
/// Only the kernel taps and the problem scaling are shared with the library.
DenseResult dense_collocation_run(const ProblemSpec& spec);

}  // namespace dtbc::oracle
