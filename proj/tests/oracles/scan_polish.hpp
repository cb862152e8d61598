#pragma once

// Brute-force oracle for the averages: scans a logarithmic (X, Y) grid for
// near-zeros of the two integrated equations
//   lambda int RHS_i(X E1 e^{w1}, Y E2 e^{w2}) + 4 pi N_i = 0
// and polishes every candidate with 2D Newton in (ln X, ln Y). The
// coefficients are written out here from the system itself, independently of
// the library's quadratic reduction.

#include <vector>

#include "csvx/algebra.hpp"
#include "csvx/torus.hpp"

namespace oracle {

struct Root {
  double c1 = 0, c2 = 0;
  /// max_i |C_i| / (scale of the terms of C_i)
  double residual = 0;
};

/// Raw integrated residuals at (X, Y) = (e^{c1}, e^{c2}).
csvx::Pair integrated_residuals(const csvx::CouplingMatrix& k, double lambda, csvx::VortexNumbers n,
                                const csvx::MomentSet& m, double c1, double c2);

/// All distinct positive roots found, sorted by decreasing X (ties by Y).
std::vector<Root> constraint_roots(const csvx::CouplingMatrix& k, double lambda,
                                   csvx::VortexNumbers n, const csvx::MomentSet& m);

}  // namespace oracle
