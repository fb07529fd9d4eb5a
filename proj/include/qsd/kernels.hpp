#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace qsd::kernels {

using cplx = std::complex<double>;

// Arithmetic inner loops behind the matrix and simulator code. Every entry
// point has a scalar reference implementation; SIMD lanes (AVX2 on x86-64,
// NEON on aarch64) are drop-in equivalents selected once at startup. Results
// may differ from scalar by normal FMA/reassociation rounding, nothing more;
// test_kernels pins lanes against each other.
struct Kernels {
    const char* name;

    // c = a * b, row-major dense, a is m x k, b is k x n, c is m x n.
    // c must not alias a or b.
    void (*matmul)(cplx* c, const cplx* a, const cplx* b,
                   std::size_t m, std::size_t k, std::size_t n);

    // c = a (x) b, row-major dense Kronecker product,
    // a is ar x ac, b is br x bc, c is (ar*br) x (ac*bc).
    void (*kron)(cplx* c, const cplx* a, std::size_t ar, std::size_t ac,
                 const cplx* b, std::size_t br, std::size_t bc);

    // Plane rotation of two contiguous rows:
    //   x[i] <- c*x[i] + sx*y[i]
    //   y[i] <- sy*x_old[i] + c*y[i]
    void (*rotate_rows)(cplx* x, cplx* y, std::size_t n,
                        double c, cplx sx, cplx sy);

    // Single-qubit gate update over a statevector. For every index pair
    // (i, i+stride) with (i & stride) == 0:
    //   (a0, a1) <- (u[0]*a0 + u[1]*a1, u[2]*a0 + u[3]*a1)
    // dim and stride are powers of two, stride < dim.
    void (*apply_1q)(cplx* amps, std::size_t dim, std::size_t stride,
                     const cplx* u);

    // y += a * x
    void (*axpy)(cplx* y, cplx a, const cplx* x, std::size_t n);
};

// The lane picked at startup: best available for the host, overridable with
// QSD_KERNEL=scalar|avx2|neon|auto in the environment.
const Kernels& active();

// Named lane, or nullptr when not compiled in / not supported by this CPU.
const Kernels* lane(const std::string& name);

// Names of all lanes usable on this host ("scalar" always included).
std::vector<std::string> available_lanes();

}  // namespace qsd::kernels
