#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qsd/matrix.hpp"

namespace qsd {

// One gate application. `matrix` is 2^k x 2^k for k = targets.size(), and
// targets[0] supplies the most significant bit of the matrix row index.
struct Gate {
    std::string mnemonic;
    std::vector<std::size_t> targets;
    ComplexMatrix matrix;
};

// Unitary circuit over `width` qubits; qubit 0 carries the most significant
// bit of a basis index. `outputs` lists the qubits kept (in order) when the
// circuit acts as a mixed-state generator; the rest are traced out.
struct Circuit {
    std::size_t width = 0;
    std::vector<std::size_t> outputs;
    std::vector<Gate> gates;
};

namespace gates {

Gate h(std::size_t q);
Gate x(std::size_t q);
Gate y(std::size_t q);
Gate z(std::size_t q);
Gate s(std::size_t q);
Gate sdg(std::size_t q);
Gate t(std::size_t q);
Gate tdg(std::size_t q);
Gate cx(std::size_t control, std::size_t target);
Gate cz(std::size_t a, std::size_t b);
Gate swap(std::size_t a, std::size_t b);
// Custom unitary on explicit targets; validated on use.
Gate u(std::vector<std::size_t> targets, ComplexMatrix m);

}  // namespace gates

// Same gate with one control qubit prepended as the new most significant
// target (matrix becomes diag(identity, old)). Result serializes as "u".
Gate controlled(const Gate& g, std::size_t control);

Gate gate_adjoint(const Gate& g);

// Throws argument_error on out-of-range or repeated targets/outputs, shape
// mismatches, or a non-unitary gate matrix.
void validate_circuit(const Circuit& c);

// |0...0> over `width` qubits; capacity-checked against max_state_qubits().
StateVector zero_state(std::size_t width);

StateVector apply_gate(StateVector psi, const Gate& g, std::size_t width);
StateVector apply_circuit(StateVector psi, const Circuit& c);

// Full 2^w x 2^w unitary, built by pushing basis columns through the gates.
ComplexMatrix circuit_unitary(const Circuit& c);

// Gates reversed and individually adjointed; width and outputs carry over.
Circuit circuit_adjoint(const Circuit& c);

// Append src's gates to dst, src qubit j acting on dst qubit wire_map[j].
void append(Circuit& dst, const Circuit& src, const std::vector<std::size_t>& wire_map);

// Same, with every appended gate controlled on dst qubit `control` (which
// must lie outside the wire map).
void append_controlled(Circuit& dst, const Circuit& src, std::size_t control,
                       const std::vector<std::size_t>& wire_map);

// Run b after a. wiring[j] is the qubit of `a` that b's qubit j continues,
// or -1 for a fresh qubit appended after a's block; outputs come from b.
Circuit compose(const Circuit& a, const Circuit& b, const std::vector<int>& wiring);

// Side-by-side tensor product; b's qubits and outputs shift by a.width.
Circuit parallel(const Circuit& a, const Circuit& b);

Circuit with_outputs(Circuit c, std::vector<std::size_t> outputs);

// Circuit file format:
//
//   # comments run to end of line
//   circuit <width>
//   outputs <q>...        (optional; default is every qubit in order)
//   <gate lines>          (mnemonic then targets; "u" takes a target count,
//                          the targets, then 4^count complex entries)
//   end
//
// Tokens may wrap lines freely. parse_circuit validates the result.
Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit& c);

}  // namespace qsd
