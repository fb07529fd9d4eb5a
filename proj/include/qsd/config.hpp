#pragma once

#include <cstddef>

namespace qsd {

// Default predicate tolerance: hermiticity, unit trace, unitarity checks.
inline constexpr double kPredicateTol = 1e-9;
// Default tolerance for reconstruction-style checks (A ~ V diag(w) V†).
inline constexpr double kReconstructTol = 1e-7;

namespace config {

// Dimension caps. Matrix products and tensor products refuse to build results
// larger than max_matrix_dim() per side; full statevector simulation refuses
// circuits wider than max_state_qubits(). Both are mutable process-wide knobs;
// set them before spawning concurrent work.
std::size_t max_matrix_dim();
void set_max_matrix_dim(std::size_t dim);

int max_state_qubits();
void set_max_state_qubits(int qubits);

}  // namespace config
}  // namespace qsd
