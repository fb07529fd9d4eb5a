#pragma once

#include <vector>

#include "qsd/circuit.hpp"
#include "qsd/matrix.hpp"

namespace qsd {

// Promise instance over a pair of mixed-state generators: yes-instances have
// output distance >= beta, no-instances <= alpha, nothing in between.
struct QsdInstance {
    Circuit q0;
    Circuit q1;
    double alpha = 0.0;
    double beta = 1.0;
};

enum class QsdOutcome { yes, no, promise_violated };

struct QsdVerdict {
    QsdOutcome outcome;
    double distance;  // the computed trace distance, reported in every case
};

// Permute the qubits of a pure state: order[new_position] = old_qubit.
// `order` must be a permutation of 0..width-1.
StateVector reorder_qubits(const StateVector& psi, const std::vector<std::size_t>& order);

// c|0...0> over the circuit's full width.
StateVector prepare_pure(const Circuit& c);

// Density matrix on c.outputs (in listed order) after running c on |0...0>
// and tracing out every other qubit. Computed as a Gram product of the
// reshaped statevector, never via the full-width projector.
ComplexMatrix prepare_mixed(const Circuit& c);

// Direct-computation oracle: simulate both generators, compare the trace
// distance against the thresholds. Exponential in width; desk scale only.
QsdVerdict decide_qsd(const QsdInstance& inst);

}  // namespace qsd
