#pragma once

#include <cstddef>
#include <vector>

#include "qsd/matrix.hpp"

namespace qsd {

// Trace-norm computation routed through the characteristic polynomial instead
// of an eigendecomposition. Numerically honest only at small sizes: the
// coefficient recurrence is fragile, so the matrix side is capped.
constexpr std::size_t kTnaMaxSide = 64;
constexpr unsigned kTnaMaxBits = 40;  // double-precision ceiling for 2^-k targets

// det(lambda I - y) with real coefficients, ascending powers.
struct CharPoly {
    std::size_t degree = 0;
    std::vector<double> coeffs;  // coeffs[j] multiplies lambda^j; coeffs[degree] = 1
};

// Characteristic polynomial of a Hermitian matrix: unitary reduction to
// tridiagonal form, then the leading-minor recurrence. Requires square,
// Hermitian within 1e-9, side at most kTnaMaxSide.
CharPoly char_poly(const ComplexMatrix& y);

// All roots of a monic polynomial whose roots are known to be real and
// nonnegative, to roughly 2^-k absolute accuracy, sorted descending.
// Roots found in [-2^-k, 0) clamp to zero; anything lower is an error, as is
// failure of the simultaneous iteration and its deflation fallback.
std::vector<double> poly_roots(const CharPoly& p, unsigned k);

// Half the singular-value sum of x, computed as half the sum of square roots
// of the characteristic-polynomial roots of x x^dagger. Agrees with
// trace_norm(x) to within 2^-k. k beyond kTnaMaxBits is refused.
double tna(const ComplexMatrix& x, unsigned k);

}  // namespace qsd
