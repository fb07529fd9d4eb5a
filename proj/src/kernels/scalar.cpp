#include "qsd/kernels.hpp"

// Reference lane. Deliberately plain loops: this is the semantics contract
// every SIMD lane is tested against.

namespace qsd::kernels {
namespace {

void matmul_scalar(cplx* c, const cplx* a, const cplx* b,
                   std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cplx(0.0, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            const cplx aik = a[i * k + l];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* brow = b + l * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

void kron_scalar(cplx* c, const cplx* a, std::size_t ar, std::size_t ac,
                 const cplx* b, std::size_t br, std::size_t bc) {
    const std::size_t cc = ac * bc;
    for (std::size_t i0 = 0; i0 < ar; ++i0) {
        for (std::size_t j0 = 0; j0 < ac; ++j0) {
            const cplx av = a[i0 * ac + j0];
            for (std::size_t i1 = 0; i1 < br; ++i1) {
                cplx* dst = c + (i0 * br + i1) * cc + j0 * bc;
                const cplx* src = b + i1 * bc;
                for (std::size_t j1 = 0; j1 < bc; ++j1) dst[j1] = av * src[j1];
            }
        }
    }
}

void rotate_rows_scalar(cplx* x, cplx* y, std::size_t n,
                        double c, cplx sx, cplx sy) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = c * xi + sx * yi;
        y[i] = sy * xi + c * yi;
    }
}

void apply_1q_scalar(cplx* amps, std::size_t dim, std::size_t stride,
                     const cplx* u) {
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const cplx a0 = amps[i0];
            const cplx a1 = amps[i1];
            amps[i0] = u[0] * a0 + u[1] * a1;
            amps[i1] = u[2] * a0 + u[3] * a1;
        }
    }
}

void axpy_scalar(cplx* y, cplx a, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Kernels& scalar_lane() {
    static const Kernels k = {
        "scalar",
        matmul_scalar,
        kron_scalar,
        rotate_rows_scalar,
        apply_1q_scalar,
        axpy_scalar,
    };
    return k;
}

}  // namespace qsd::kernels
