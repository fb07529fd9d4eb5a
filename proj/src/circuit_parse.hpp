#pragma once

// Gate-list parsing shared between the circuit and proof-system file formats.
// Internal to the library; not installed.

#include <iosfwd>
#include <vector>

#include "parse_util.hpp"
#include "qsd/circuit.hpp"

namespace qsd::detail {

// Consumes gate descriptions up to and including the closing "end".
std::vector<Gate> parse_gate_list(parse::Cursor& cur);

// Emits one gate per line plus the closing "end" line.
void serialize_gates(std::ostream& os, const std::vector<Gate>& gates);

}  // namespace qsd::detail
