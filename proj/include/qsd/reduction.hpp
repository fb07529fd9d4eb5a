#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qsd/circuit.hpp"
#include "qsd/matrix.hpp"
#include "qsd/states.hpp"

namespace qsd {

// A two-party interactive proof system with an even number of messages.
// Registers: verifier (qv qubits), message (qm), prover private (qp), all
// starting in |0>. Messages alternate starting with the verifier: round i
// applies verifiers[i-1] to (V, M), then provers[i-1] to (M, P). After the
// last message verifiers[k-1] computes the verdict; the run accepts when
// verifier qubit `outbit` reads 1.
struct ProofSystemSpec {
    std::size_t qv = 0;
    std::size_t qm = 0;
    std::size_t qp = 0;
    std::size_t messages = 0;  // even, at least 2
    std::size_t outbit = 0;    // index within the verifier register
    std::vector<Circuit> verifiers;  // messages/2 + 1 circuits on qv+qm wires
    std::vector<Circuit> provers;    // messages/2 circuits on qm+qp wires

    std::size_t rounds() const { return messages / 2 + 1; }  // verifier turns
};

// States standing in for the verifier's intermediate views. Either the honest
// interaction itself (perfect stand-in) or one preparation circuit per even
// message index, each producing a state on qv+qm output qubits.
struct SimulatorSpec {
    bool use_honest = true;
    std::map<std::size_t, Circuit> circuits;  // message index -> preparation
};

void validate_proof_system(const ProofSystemSpec& ps);

// Contents of a ".qps" proof-system file: the system plus its simulator.
struct ProofSystemFile {
    ProofSystemSpec system;
    SimulatorSpec simulator;
};

ProofSystemFile parse_qps(const std::string& text);
std::string serialize_qps(const ProofSystemFile& file);

// The circuit that runs the honest interaction for the first j messages on
// qv+qm+qp wires, with the verifier and message registers as outputs.
Circuit interaction_circuit(const ProofSystemSpec& ps, std::size_t j);

// Exact density matrix of the verifier-side view (V and M registers) after j
// messages of honest interaction, by statevector simulation.
ComplexMatrix compute_view(const ProofSystemSpec& ps, std::size_t j);

// Exact optimum acceptance probability over all provers, for two-message
// systems. Implemented for the two regimes that admit closed forms: a pure
// verifier residual after the first message, or a rank-one acceptance
// operator on its support. Anything else throws unsupported_error.
double max_accept_exact(const ProofSystemSpec& ps);

// Circuits preparing the two tensor-of-views states compared by the
// reduction: the first collects the simulated views after each even message
// (with the final one pulled back through an acceptance-forced last verifier
// turn), the second the same views advanced by one verifier turn. Honest
// runs make the pair nearly identical; systems that reject with high
// probability force the pair apart.
std::pair<Circuit, Circuit> build_qsd(const ProofSystemSpec& ps, const SimulatorSpec& sim);

// build_qsd plus distinguishability thresholds derived from an acceptance
// bound epsilon: the prepared states are guaranteed at least gap_bound =
// (1 - sqrt(epsilon))^2 / (3 (rounds - 1)) apart whenever every prover is
// accepted with probability at most epsilon.
struct QsdReduction {
    QsdInstance instance;
    double epsilon = 0.0;
    double gap_bound = 0.0;
};

QsdReduction reduce_to_qsd(const ProofSystemSpec& ps, const SimulatorSpec& sim, double epsilon);

// Checks the view-gap inequality on supplied stand-in views rho_1..rho_{k-1}
// (densities on the V and M registers): the tensor products of their
// verifier-side reductions, taken before and after one verifier turn, differ
// by at least (1 - sqrt(epsilon))^2 / (3 (k-1)). Requires the final view to
// be accepted with certainty once the last verifier turn is applied.
struct ViewGapCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

ViewGapCheck check_view_gap(const ProofSystemSpec& ps, const std::vector<ComplexMatrix>& rhos,
                            double epsilon);

}  // namespace qsd
