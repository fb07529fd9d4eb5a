#pragma once

#include <cstdint>
#include <random>

#include "qsd/matrix.hpp"

namespace qsd {

// Seeded deterministic randomness. Every stochastic routine in the library
// takes an Rng explicitly so runs are reproducible from the seed alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }  // [0, 1)
    std::uint64_t integer(std::uint64_t bound);     // [0, bound)

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Haar-distributed unitary: complex Ginibre sample, then modified Gram-Schmidt
// with positive column pivots (QR with positive diagonal R).
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

// Random density matrix G G(dagger) / tr, with G a dim x k Ginibre block.
// k = 0 means k = dim (full rank almost surely); k = 1 gives a pure state.
ComplexMatrix random_density(std::size_t dim, Rng& rng, std::size_t k = 0);

// Random pure state amplitudes (normalized Ginibre vector).
StateVector random_state(std::size_t dim, Rng& rng);

}  // namespace qsd
