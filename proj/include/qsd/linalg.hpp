#pragma once

#include <cstddef>
#include <vector>

#include "qsd/matrix.hpp"

namespace qsd {

// Kronecker product a (x) b. Result dimensions are checked against
// config::max_matrix_dim() before allocation.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out every subsystem whose index is not listed in `keep`.
// `dims` lists the subsystem dimensions in order; subsystem 0 is the most
// significant factor of the row index. `keep` must be strictly increasing.
// The kept subsystems retain their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

struct Eig {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // column j pairs with values[j]
};

// Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.
// Throws argument_error if the input is not Hermitian to 1e-9, numeric_error
// if the sweep cap is exhausted before off-diagonal mass is annihilated.
Eig hermitian_eig(const ComplexMatrix& w);

// Eigenvalues only (descending). Cheaper: no eigenvector accumulation.
std::vector<double> hermitian_eigvalues(const ComplexMatrix& w);

// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
// [-1e-9, 0) are clamped to zero; anything more negative is an argument_error.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a);

// Halved trace norm (1/2) tr sqrt(X†X). For a difference of density matrices
// this lands in [0, 1]. Hermitian inputs use their eigenvalues directly;
// general inputs go through X†X.
double trace_norm(const ComplexMatrix& x);

// Uhlmann fidelity F(rho, xi) = tr sqrt(sqrt(rho) xi sqrt(rho)). Both
// arguments must be density matrices (validated).
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& xi);

struct Svd {
    ComplexMatrix u;                     // m x m unitary
    std::vector<double> singular_values; // descending, length min(m, n)
    ComplexMatrix v;                     // n x n unitary, a = u diag(s) v†
};

// Full singular value decomposition via the Gram matrix eigenproblem, with
// Gram-Schmidt completion of the null-space columns.
Svd svd(const ComplexMatrix& a);

// Hermitian to tol, PSD to tol, unit trace to tol.
bool is_density(const ComplexMatrix& rho, double tol = 1e-7);

}  // namespace qsd
