#include "qsd/random.hpp"

#include <cmath>

#include "qsd/errors.hpp"

namespace qsd {

std::uint64_t Rng::integer(std::uint64_t bound) {
    if (bound == 0) throw argument_error("Rng::integer: bound must be positive");
    std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
    return dist(engine_);
}

namespace {

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    const double inv_sqrt2 = std::sqrt(0.5);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            g(i, j) = cplx(rng.normal(), rng.normal()) * inv_sqrt2;
    return g;
}

}  // namespace

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    if (dim == 0) throw argument_error("random_unitary: dimension must be positive");
    ComplexMatrix q = ginibre(dim, dim, rng);
    // Modified Gram-Schmidt over columns; the implicit R has positive diagonal,
    // which is exactly the phase convention that makes Q Haar-distributed.
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                cplx dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i) dot += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < dim; ++i) q(i, j) -= dot * q(i, k);
            }
        double nrm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) nrm += std::norm(q(i, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) throw numeric_error("random_unitary: degenerate Ginibre sample");
        for (std::size_t i = 0; i < dim; ++i) q(i, j) /= nrm;
    }
    return q;
}

ComplexMatrix random_density(std::size_t dim, Rng& rng, std::size_t k) {
    if (dim == 0) throw argument_error("random_density: dimension must be positive");
    if (k == 0) k = dim;
    ComplexMatrix g = ginibre(dim, k, rng);
    ComplexMatrix rho = g * g.adjoint();
    double tr = rho.trace().real();
    rho *= cplx(1.0 / tr);
    // Scrub roundoff so downstream hermiticity predicates see an exact fixpoint.
    for (std::size_t i = 0; i < dim; ++i) {
        rho(i, i) = rho(i, i).real();
        for (std::size_t j = i + 1; j < dim; ++j) {
            cplx m = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = m;
            rho(j, i) = std::conj(m);
        }
    }
    return rho;
}

StateVector random_state(std::size_t dim, Rng& rng) {
    if (dim == 0) throw argument_error("random_state: dimension must be positive");
    StateVector psi(dim);
    double nrm = 0.0;
    for (cplx& a : psi.amps) {
        a = cplx(rng.normal(), rng.normal());
        nrm += std::norm(a);
    }
    nrm = std::sqrt(nrm);
    for (cplx& a : psi.amps) a /= nrm;
    return psi;
}

}  // namespace qsd
