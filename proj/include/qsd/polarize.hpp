#pragma once

#include <optional>
#include <string>
#include <utility>

#include "qsd/circuit.hpp"
#include "qsd/matrix.hpp"

namespace qsd {

// Knobs of the three-stage distance polarization pipeline:
// xor(r) -> amplify(s) -> xor(n).
struct PolarizationParams {
    std::size_t n = 1;  // security parameter, block count of the final xor
    std::size_t r = 1;  // first-stage xor exponent
    std::size_t s = 1;  // amplification copies
    double alpha = 0.0;
    double beta = 1.0;
    bool s_capped = false;  // derivation hit the copy ceiling (alpha ~ 0)
};

// Ceiling on derived amplification copies; the derivation formula diverges as
// alpha -> 0 and the cap keeps the parameters finite (flagged via s_capped).
inline constexpr std::size_t kMaxAmplifyCopies = std::size_t{1} << 20;

// Ceiling on the width of any materialized transform circuit. Parameter
// settings beyond it are analyzed through polarize_bounds instead.
inline constexpr std::size_t kMaxCircuitQubits = std::size_t{1} << 16;

// r = ceil(log(8n)/log(beta^2/alpha)), s = floor(alpha^-r / 2), with values
// within 1e-9 relative of an integer snapped to it before rounding.
// Requires 0 <= alpha < beta^2 <= 1; alpha = 0 yields r = 1 and a capped s.
PolarizationParams derive_polarization_params(double alpha, double beta, std::size_t n);

// r-block xor mixture construction: r-1 Hadamard control ancillas, one
// parity ancilla (X-offset in the second circuit), each block running the
// control=0 / control=1 generator coherently. Output distance is exactly
// (input distance)^r. r = 1 returns the canonicalized inputs unchanged.
std::pair<Circuit, Circuit> xor_transform(const Circuit& q0, const Circuit& q1, std::size_t r);

// s side-by-side copies of each generator (s = 1 returns inputs unchanged).
std::pair<Circuit, Circuit> amplify_transform(const Circuit& q0, const Circuit& q1,
                                              std::size_t s);

struct PolarizeResult {
    Circuit r0;
    Circuit r1;
    PolarizationParams params;
};

// Full pipeline on circuit descriptions. Parameters come from
// derive_polarization_params(alpha, beta, n) unless (r, s) are overridden.
PolarizeResult polarize(const Circuit& q0, const Circuit& q1, std::size_t n, double alpha,
                        double beta,
                        std::optional<std::pair<std::size_t, std::size_t>> override_rs = {});

// Operator-level counterparts, used to verify the circuit constructions and
// to run the pipeline on explicit density matrices at desk scale.
ComplexMatrix xor_mixture(const ComplexMatrix& rho0, const ComplexMatrix& rho1, std::size_t r,
                          bool offset);
ComplexMatrix tensor_power(const ComplexMatrix& rho, std::size_t s);
std::pair<ComplexMatrix, ComplexMatrix> polarize_states(const ComplexMatrix& rho0,
                                                        const ComplexMatrix& rho1,
                                                        const PolarizationParams& params);

// Analytic bracket on the output distance for input distance d_in: the xor
// stages square with the exact power law, the amplification stage is
// bracketed by max(d, 1-e^{-s d^2/2}) from below and min(1, s d) from above.
std::pair<double, double> polarize_bounds(double d_in, const PolarizationParams& params);

// Comment block recording the parameters, prepended to emitted circuit files.
std::string polarization_header(const PolarizationParams& params);

}  // namespace qsd
