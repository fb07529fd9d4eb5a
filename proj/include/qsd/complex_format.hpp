#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace qsd {

using cplx = std::complex<double>;

// Text form of one complex entry, shared by the circuit, matrix, and proof
// system file formats. A token is written without spaces as
//
//   entry := real | imag | real imag
//   real  := number
//   imag  := number 'j'            (sign required when it follows a real part)
//   number := signed decimal float | signed integer ratio "p/q"
//
// Examples: 1, -0.5, 2j, 1+0j, 0.70710678118654746-0j, 1/2-3/4j.
//
// format_complex emits the canonical "re+imj" form with enough digits to
// round-trip doubles exactly.
std::string format_complex(cplx z);

// Parses a single entry token. Returns false on malformed input.
bool parse_complex_token(std::string_view token, cplx& out);

}  // namespace qsd
