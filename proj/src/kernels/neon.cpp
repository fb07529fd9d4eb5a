#if defined(__aarch64__)

#include <arm_neon.h>

#include "qsd/kernels.hpp"

// NEON lane for aarch64. One float64x2_t holds a single complex double as
// [re, im]; the product uses the swap/negate identity
//
//   a*b = [ar*br - ai*bi, ar*bi + ai*br]
//       = dup(ar)*b + dup(ai)*swap(b)*[-1, 1]
//
// NEON is baseline on aarch64, so no runtime feature check is needed.

namespace qsd::kernels {
namespace {

inline float64x2_t cmul_neon(float64x2_t a, float64x2_t b) {
    const float64x2_t sign = {-1.0, 1.0};
    float64x2_t ar = vdupq_laneq_f64(a, 0);
    float64x2_t ai = vdupq_laneq_f64(a, 1);
    float64x2_t bsw = vextq_f64(b, b, 1);
    return vfmaq_f64(vmulq_f64(vmulq_f64(ai, bsw), sign), ar, b);
}

inline float64x2_t loadc(const cplx* p) {
    return vld1q_f64(reinterpret_cast<const double*>(p));
}

inline void storec(cplx* p, float64x2_t v) {
    vst1q_f64(reinterpret_cast<double*>(p), v);
}

void matmul_neon(cplx* c, const cplx* a, const cplx* b,
                 std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cplx(0.0, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            const cplx aik = a[i * k + l];
            if (aik == cplx(0.0, 0.0)) continue;
            const float64x2_t av = loadc(&aik);
            const cplx* brow = b + l * n;
            for (std::size_t j = 0; j < n; ++j) {
                float64x2_t cv = loadc(crow + j);
                storec(crow + j, vaddq_f64(cv, cmul_neon(av, loadc(brow + j))));
            }
        }
    }
}

void kron_neon(cplx* c, const cplx* a, std::size_t ar, std::size_t ac,
               const cplx* b, std::size_t br, std::size_t bc) {
    const std::size_t cc = ac * bc;
    for (std::size_t i0 = 0; i0 < ar; ++i0) {
        for (std::size_t j0 = 0; j0 < ac; ++j0) {
            const cplx av = a[i0 * ac + j0];
            const float64x2_t avv = loadc(&av);
            for (std::size_t i1 = 0; i1 < br; ++i1) {
                cplx* dst = c + (i0 * br + i1) * cc + j0 * bc;
                const cplx* src = b + i1 * bc;
                for (std::size_t j1 = 0; j1 < bc; ++j1)
                    storec(dst + j1, cmul_neon(avv, loadc(src + j1)));
            }
        }
    }
}

void rotate_rows_neon(cplx* x, cplx* y, std::size_t n,
                      double c, cplx sx, cplx sy) {
    const float64x2_t cv = vdupq_n_f64(c);
    const float64x2_t sxv = loadc(&sx);
    const float64x2_t syv = loadc(&sy);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t vx = loadc(x + i);
        float64x2_t vy = loadc(y + i);
        storec(x + i, vfmaq_f64(cmul_neon(sxv, vy), vx, cv));
        storec(y + i, vfmaq_f64(cmul_neon(syv, vx), vy, cv));
    }
}

void apply_1q_neon(cplx* amps, std::size_t dim, std::size_t stride,
                   const cplx* u) {
    const float64x2_t u0 = loadc(u + 0), u1 = loadc(u + 1);
    const float64x2_t u2 = loadc(u + 2), u3 = loadc(u + 3);
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            cplx* p0 = amps + base + off;
            cplx* p1 = p0 + stride;
            float64x2_t a0 = loadc(p0);
            float64x2_t a1 = loadc(p1);
            storec(p0, vaddq_f64(cmul_neon(u0, a0), cmul_neon(u1, a1)));
            storec(p1, vaddq_f64(cmul_neon(u2, a0), cmul_neon(u3, a1)));
        }
    }
}

void axpy_neon(cplx* y, cplx a, const cplx* x, std::size_t n) {
    const float64x2_t av = loadc(&a);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t yv = loadc(y + i);
        storec(y + i, vaddq_f64(yv, cmul_neon(av, loadc(x + i))));
    }
}

}  // namespace

const Kernels& neon_lane() {
    static const Kernels k = {
        "neon",
        matmul_neon,
        kron_neon,
        rotate_rows_neon,
        apply_1q_neon,
        axpy_neon,
    };
    return k;
}

}  // namespace qsd::kernels

#endif  // aarch64
