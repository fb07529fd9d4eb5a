#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsd/matrix.hpp"
#include "qsd/polarize.hpp"
#include "qsd/states.hpp"

namespace qsd {

// How the prover side of a protocol run is realized.
//  - honest: the optimal strategy for the protocol at hand (Helstrom
//    measurement for the distance test, Uhlmann unitary for the closeness
//    test), built from the instance itself.
//  - fixed_unitary: a fixed unitary on the prover-visible register (message
//    plus an equal-width private register in the distance test, the
//    environment register in the closeness test).
//  - fixed_channel: a Kraus-operator channel on the prover-visible register.
//  - random: a seeded Haar-random unitary of the fixed_unitary shape.
struct ProverStrategy {
    enum class Kind { honest, fixed_unitary, fixed_channel, random };

    Kind kind = Kind::honest;
    ComplexMatrix unitary;             // fixed_unitary
    std::vector<ComplexMatrix> kraus;  // fixed_channel
    std::uint64_t seed = 0;            // random

    static ProverStrategy honest_optimal();
    static ProverStrategy fixed(ComplexMatrix u);
    static ProverStrategy channel(std::vector<ComplexMatrix> kraus);
    static ProverStrategy randomized(std::uint64_t seed);
};

// Optimal two-state discrimination: pi0 projects onto the nonnegative
// eigenspace of xi0 - xi1 (ties included), pi1 = I - pi0, and
// p_opt = (tr pi0 xi0 + tr pi1 xi1) / 2 = 1/2 + (1/2)||xi0 - xi1||tr.
struct Helstrom {
    ComplexMatrix pi0;
    ComplexMatrix pi1;
    double p_opt;
};

Helstrom helstrom(const ComplexMatrix& xi0, const ComplexMatrix& xi1);

struct UhlmannResult {
    ComplexMatrix unitary;  // acts on the env factor
    double overlap;         // achieved |<psi|(I (x) U)|phi>|, equals fidelity
};

// States live on keep_dim (x) env_dim with the kept factor most significant.
// Returns the env unitary maximizing the overlap of (I (x) U)|phi> with
// |psi>, phase-fixed so the overlap is real nonnegative; its value equals
// F(tr_env phi, tr_env psi).
UhlmannResult uhlmann_unitary(const StateVector& phi, const StateVector& psi,
                              std::size_t keep_dim, std::size_t env_dim);

// Record of one protocol run. Views are the verifier-side density matrices
// after each of the two messages; the simulator counterparts come from
// simulator_views_distance / simulator_views_closeness.
struct ProtocolTranscript {
    std::string protocol;  // "distance-test" or "closeness-test"
    PolarizationParams params;
    std::vector<ComplexMatrix> views;
    double acceptance = 0.0;          // this prover's acceptance probability
    double optimal_acceptance = 0.0;  // honest-prover benchmark on the instance
    double distance = 0.0;            // trace distance of the polarized pair
    double fidelity_value = 0.0;      // fidelity of the polarized pair
    double completeness_error = 0.0;  // 1 - optimal_acceptance
    // Analytic ceiling on the view gap between honest run and simulator:
    // the completeness error itself for the distance test (the gap is exactly
    // that), sqrt(2 (1 - fidelity)) for the closeness test (vector-norm
    // bound; the completeness error does not dominate the gap there).
    double view_gap_bound = 0.0;
};

// Both protocols run the instance through the polarization pipeline with the
// given (r, s, n) first; use trivial parameters to test generators directly.

// Coin-flip discrimination game: the verifier sends xi_b for a uniform b, the
// prover answers a bit read off the first message qubit after its action, and
// the verifier accepts on a match.
ProtocolTranscript run_distance_test(const QsdInstance& inst, const ProverStrategy& prover,
                                     const PolarizationParams& params);

// Purification handoff: the verifier prepares R0|0...0>, sends the non-output
// qubits, the prover steers them toward R1's purification, and the verifier
// accepts iff un-computing R1 returns all zeros.
ProtocolTranscript run_closeness_test(const QsdInstance& inst, const ProverStrategy& prover,
                                      const PolarizationParams& params);

// Prover-free reconstructions of the verifier views for the zero-knowledge
// comparison; same shapes and order as ProtocolTranscript::views.
std::vector<ComplexMatrix> simulator_views_distance(const QsdInstance& inst,
                                                    const PolarizationParams& params);
std::vector<ComplexMatrix> simulator_views_closeness(const QsdInstance& inst,
                                                     const PolarizationParams& params);

}  // namespace qsd
