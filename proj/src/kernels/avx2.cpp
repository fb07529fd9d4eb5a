#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "qsd/kernels.hpp"

// AVX2+FMA lane. Complex doubles are processed two at a time; a __m256d holds
// [re0, im0, re1, im1]. The building block is the interleaved complex product
//
//   p = fmaddsub(a, dup_re(b), swap(a) * dup_im(b))
//
// which yields (ar*br - ai*bi, ai*br + ar*bi) per element. Compiled only when
// the translation unit gets -mavx2 -mfma; dispatch.cpp checks cpuid before
// handing this lane out.

namespace qsd::kernels {
namespace {

// a * s where s is one complex scalar pre-split into dup'd re/im registers.
inline __m256d cmul_bcast(__m256d a, __m256d s_re, __m256d s_im) {
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, s_re, _mm256_mul_pd(a_sw, s_im));
}

void matmul_avx2(cplx* c, const cplx* a, const cplx* b,
                 std::size_t m, std::size_t k, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t(1);
    for (std::size_t i = 0; i < m; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cplx(0.0, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            const cplx aik = a[i * k + l];
            if (aik == cplx(0.0, 0.0)) continue;
            const __m256d s_re = _mm256_set1_pd(aik.real());
            const __m256d s_im = _mm256_set1_pd(aik.imag());
            const cplx* brow = b + l * n;
            double* cd = reinterpret_cast<double*>(crow);
            const double* bd = reinterpret_cast<const double*>(brow);
            std::size_t j = 0;
            for (; j < n2; j += 2) {
                __m256d bv = _mm256_loadu_pd(bd + 2 * j);
                __m256d cv = _mm256_loadu_pd(cd + 2 * j);
                cv = _mm256_add_pd(cv, cmul_bcast(bv, s_re, s_im));
                _mm256_storeu_pd(cd + 2 * j, cv);
            }
            for (; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

void kron_avx2(cplx* c, const cplx* a, std::size_t ar, std::size_t ac,
               const cplx* b, std::size_t br, std::size_t bc) {
    const std::size_t cc = ac * bc;
    const std::size_t bc2 = bc & ~std::size_t(1);
    for (std::size_t i0 = 0; i0 < ar; ++i0) {
        for (std::size_t j0 = 0; j0 < ac; ++j0) {
            const cplx av = a[i0 * ac + j0];
            const __m256d s_re = _mm256_set1_pd(av.real());
            const __m256d s_im = _mm256_set1_pd(av.imag());
            for (std::size_t i1 = 0; i1 < br; ++i1) {
                cplx* dst = c + (i0 * br + i1) * cc + j0 * bc;
                const cplx* src = b + i1 * bc;
                double* dd = reinterpret_cast<double*>(dst);
                const double* sd = reinterpret_cast<const double*>(src);
                std::size_t j1 = 0;
                for (; j1 < bc2; j1 += 2) {
                    __m256d sv = _mm256_loadu_pd(sd + 2 * j1);
                    _mm256_storeu_pd(dd + 2 * j1, cmul_bcast(sv, s_re, s_im));
                }
                for (; j1 < bc; ++j1) dst[j1] = av * src[j1];
            }
        }
    }
}

void rotate_rows_avx2(cplx* x, cplx* y, std::size_t n,
                      double c, cplx sx, cplx sy) {
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sx_re = _mm256_set1_pd(sx.real());
    const __m256d sx_im = _mm256_set1_pd(sx.imag());
    const __m256d sy_re = _mm256_set1_pd(sy.real());
    const __m256d sy_im = _mm256_set1_pd(sy.imag());
    double* xd = reinterpret_cast<double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const std::size_t n2 = n & ~std::size_t(1);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        __m256d vx = _mm256_loadu_pd(xd + 2 * i);
        __m256d vy = _mm256_loadu_pd(yd + 2 * i);
        __m256d nx = _mm256_fmadd_pd(vx, cv, cmul_bcast(vy, sx_re, sx_im));
        __m256d ny = _mm256_fmadd_pd(vy, cv, cmul_bcast(vx, sy_re, sy_im));
        _mm256_storeu_pd(xd + 2 * i, nx);
        _mm256_storeu_pd(yd + 2 * i, ny);
    }
    for (; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = c * xi + sx * yi;
        y[i] = sy * xi + c * yi;
    }
}

void apply_1q_avx2(cplx* amps, std::size_t dim, std::size_t stride,
                   const cplx* u) {
    if (stride < 2) {
        for (std::size_t base = 0; base < dim; base += 2) {
            const cplx a0 = amps[base];
            const cplx a1 = amps[base + 1];
            amps[base] = u[0] * a0 + u[1] * a1;
            amps[base + 1] = u[2] * a0 + u[3] * a1;
        }
        return;
    }
    const __m256d u0_re = _mm256_set1_pd(u[0].real()), u0_im = _mm256_set1_pd(u[0].imag());
    const __m256d u1_re = _mm256_set1_pd(u[1].real()), u1_im = _mm256_set1_pd(u[1].imag());
    const __m256d u2_re = _mm256_set1_pd(u[2].real()), u2_im = _mm256_set1_pd(u[2].imag());
    const __m256d u3_re = _mm256_set1_pd(u[3].real()), u3_im = _mm256_set1_pd(u[3].imag());
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        double* x = reinterpret_cast<double*>(amps + base);
        double* y = reinterpret_cast<double*>(amps + base + stride);
        for (std::size_t off = 0; off < stride; off += 2) {
            __m256d vx = _mm256_loadu_pd(x + 2 * off);
            __m256d vy = _mm256_loadu_pd(y + 2 * off);
            __m256d nx = _mm256_add_pd(cmul_bcast(vx, u0_re, u0_im),
                                       cmul_bcast(vy, u1_re, u1_im));
            __m256d ny = _mm256_add_pd(cmul_bcast(vx, u2_re, u2_im),
                                       cmul_bcast(vy, u3_re, u3_im));
            _mm256_storeu_pd(x + 2 * off, nx);
            _mm256_storeu_pd(y + 2 * off, ny);
        }
    }
}

void axpy_avx2(cplx* y, cplx a, const cplx* x, std::size_t n) {
    const __m256d a_re = _mm256_set1_pd(a.real());
    const __m256d a_im = _mm256_set1_pd(a.imag());
    double* yd = reinterpret_cast<double*>(y);
    const double* xd = reinterpret_cast<const double*>(x);
    const std::size_t n2 = n & ~std::size_t(1);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_bcast(xv, a_re, a_im)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Kernels& avx2_lane() {
    static const Kernels k = {
        "avx2",
        matmul_avx2,
        kron_avx2,
        rotate_rows_avx2,
        apply_1q_avx2,
        axpy_avx2,
    };
    return k;
}

}  // namespace qsd::kernels

#endif  // x86-64
