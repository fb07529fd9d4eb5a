#include "qsd/tna.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

// Coefficient generation and the final root polish run in extended
// precision: characteristic-polynomial coefficients condition badly with
// the matrix side, and double intermediates alone lose the 2^-k contract
// well before the side cap. Quad covers sides through 16 with a wide
// margin; past that the root condition number of the coefficient
// representation itself eats quad, so the large-side path runs octuple.
using quad_float = boost::multiprecision::cpp_bin_float_quad;
using oct_float = boost::multiprecision::cpp_bin_float_oct;

template <typename F>
struct cxf {
    F re, im;
};

template <typename F>
inline cxf<F> mul(const cxf<F>& a, const cxf<F>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <typename F>
inline cxf<F> div(const cxf<F>& a, const cxf<F>& b) {
    const F d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <typename F>
inline F magnitude(const cxf<F>& a) {
    return sqrt(a.re * a.re + a.im * a.im);
}

// Ascending coefficients of det(lambda I - y). Householder similarity to
// Hermitian tridiagonal form, then the leading-minor three-term recurrence
// p_k = (lambda - a_k) p_{k-1} - |b_{k-1}|^2 p_{k-2}. Unlike trace-power
// recurrences, nothing here grows beyond the coefficient scale itself, so
// the result holds ~type-epsilon relative accuracy at every side.
template <typename F>
std::vector<F> charpoly_fp(const ComplexMatrix& y) {
    using C = cxf<F>;
    const std::size_t n = y.rows();
    std::vector<C> a(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        a[i] = {F(y.data()[i].real()), F(y.data()[i].imag())};

    std::vector<F> bsq(n > 1 ? n - 1 : 0, F(0));
    std::vector<C> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        F sig(0);
        for (std::size_t i = k + 2; i < n; ++i) {
            const C& x = a[i * n + k];
            sig += x.re * x.re + x.im * x.im;
        }
        const C x0 = a[(k + 1) * n + k];
        const F x0n2 = x0.re * x0.re + x0.im * x0.im;
        const F xn2 = x0n2 + sig;
        bsq[k] = xn2;
        if (xn2 == 0) continue;  // column already annihilated
        const F xn = sqrt(xn2);
        C u{F(1), F(0)};
        if (x0n2 != 0) {
            const F x0n = sqrt(x0n2);
            u = {x0.re / x0n, x0.im / x0n};
        }
        // Reflector v = x + u |x| e1 (sign keeps v0 away from cancellation).
        for (std::size_t i = 0; i < n; ++i) v[i] = {F(0), F(0)};
        v[k + 1] = {x0.re + u.re * xn, x0.im + u.im * xn};
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i * n + k];
        F vn2(0);
        for (std::size_t i = k + 1; i < n; ++i) vn2 += v[i].re * v[i].re + v[i].im * v[i].im;
        if (vn2 == 0) continue;
        const F tau = 2 / vn2;
        // Two-sided update A <- H A H with H = I - tau v v^dag, via
        // q = tau A v - (tau^2/2)(v^dag A v) v, A <- A - q v^dag - v q^dag.
        for (std::size_t r = k; r < n; ++r) {
            C acc{F(0), F(0)};
            for (std::size_t t = k + 1; t < n; ++t) {
                const C pr = mul(a[r * n + t], v[t]);
                acc.re += pr.re;
                acc.im += pr.im;
            }
            p[r] = {tau * acc.re, tau * acc.im};
        }
        C kc{F(0), F(0)};
        for (std::size_t i = k + 1; i < n; ++i) {
            kc.re += v[i].re * p[i].re + v[i].im * p[i].im;
            kc.im += v[i].re * p[i].im - v[i].im * p[i].re;
        }
        kc.re *= tau / 2;
        kc.im *= tau / 2;
        for (std::size_t i = k; i < n; ++i) {
            const C kv = mul(kc, v[i]);
            p[i].re -= kv.re;
            p[i].im -= kv.im;
        }
        for (std::size_t r = k; r < n; ++r)
            for (std::size_t col = k; col < n; ++col) {
                const C t1{p[r].re * v[col].re + p[r].im * v[col].im,
                           p[r].im * v[col].re - p[r].re * v[col].im};
                const C t2{v[r].re * p[col].re + v[r].im * p[col].im,
                           v[r].im * p[col].re - v[r].re * p[col].im};
                a[r * n + col].re -= t1.re + t2.re;
                a[r * n + col].im -= t1.im + t2.im;
            }
        // The annihilated entries are |b_k| up to rounding; pin them exact.
        a[(k + 1) * n + k] = {-u.re * xn, -u.im * xn};
        for (std::size_t i = k + 2; i < n; ++i) {
            a[i * n + k] = {F(0), F(0)};
            a[k * n + i] = {F(0), F(0)};
        }
    }
    if (n > 1) {
        const C& last = a[(n - 1) * n + (n - 2)];
        bsq[n - 2] = last.re * last.re + last.im * last.im;
    }

    std::vector<F> prev{F(1)};
    std::vector<F> cur{-a[0].re, F(1)};
    if (n == 0) return prev;
    for (std::size_t k = 1; k < n; ++k) {
        const F ak = a[k * n + k].re;
        std::vector<F> nxt(k + 2, F(0));
        for (std::size_t j = 0; j < cur.size(); ++j) {
            nxt[j + 1] += cur[j];
            nxt[j] -= ak * cur[j];
        }
        for (std::size_t j = 0; j < prev.size(); ++j) nxt[j] -= bsq[k - 1] * prev[j];
        prev.swap(cur);
        cur.swap(nxt);
    }
    return cur;
}

using cd = std::complex<double>;

std::pair<cd, cd> eval_poly(const std::vector<double>& c, cd z) {
    cd p = c.back(), dp = 0.0;
    for (std::size_t j = c.size() - 1; j-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[j];
    }
    return {p, dp};
}

std::pair<double, double> eval_poly(const std::vector<double>& c, double x) {
    double p = c.back(), dp = 0.0;
    for (std::size_t j = c.size() - 1; j-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[j];
    }
    return {p, dp};
}

// Every root lies within this radius of the origin (Fujiwara bound). Stays
// at the root scale where the additive Cauchy bound explodes with the degree.
double root_radius(const std::vector<double>& c) {
    const std::size_t n = c.size() - 1;
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        m = std::max(m, std::pow(std::abs(c[j]), 1.0 / static_cast<double>(n - j)));
    return 2.0 * m + 1e-12;
}

// Seed moduli from the upper convex hull of (j, log|c_j|): one modulus per
// root, grouped into rings by hull segment. When the root moduli span many
// decades, iterates seeded on one global circle can stall at spurious
// equilibria of the simultaneous iteration (Newton pull balancing the
// repulsion term in a root-free region) instead of migrating inward; ring
// seeds start every iterate at its own scale.
std::vector<double> seed_moduli(const std::vector<double>& logc) {
    const std::size_t n = logc.size() - 1;
    std::vector<std::size_t> hull;  // vertex indices, ascending; slopes descend
    for (std::size_t j = 0; j <= n; ++j) {
        if (!std::isfinite(logc[j])) continue;  // zero coefficient
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            if ((logc[j] - logc[b]) * static_cast<double>(b - a) <
                (logc[b] - logc[a]) * static_cast<double>(j - b))
                break;
            hull.pop_back();
        }
        hull.push_back(j);
    }
    std::vector<double> moduli;
    moduli.reserve(n);
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        const std::size_t k1 = hull[s], k2 = hull[s + 1];
        const double r = std::exp((logc[k1] - logc[k2]) / static_cast<double>(k2 - k1));
        moduli.insert(moduli.end(), k2 - k1, r);
    }
    return moduli;  // ascending, one per root when c_0 is nonzero
}

// Ring seeds over the polygon moduli. Each ring gets full angular coverage
// and its own phase so rings never align and no seed starts on the real axis.
std::vector<cd> ring_seeds(const std::vector<double>& moduli, double cap) {
    const std::size_t n = moduli.size();
    std::vector<cd> z(n);
    std::size_t i = 0, ring = 0;
    while (i < n) {
        std::size_t e = i;
        while (e < n && moduli[e] == moduli[i]) ++e;
        const double r = std::min(moduli[i], cap);
        for (std::size_t t = i; t < e; ++t) {
            const double angle = 6.283185307179586 * (static_cast<double>(t - i) + 0.5) /
                                     static_cast<double>(e - i) +
                                 0.4 + 0.7 * static_cast<double>(ring);
            z[t] = r * cd(std::cos(angle), std::sin(angle));
        }
        i = e;
        ++ring;
    }
    return z;
}

std::vector<cd> poly_seeds(const std::vector<double>& c) {
    std::vector<double> lg(c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        lg[j] = c[j] == 0.0 ? -std::numeric_limits<double>::infinity()
                            : std::log(std::abs(c[j]));
    return ring_seeds(seed_moduli(lg), root_radius(c));
}

// Simultaneous first pass in double; false when the sweep cap is hit.
bool aberth_roots(const std::vector<double>& c, std::vector<double>& out) {
    const std::size_t n = c.size() - 1;
    const double radius = root_radius(c);
    std::vector<cd> z = poly_seeds(c);

    bool settled = false;
    for (int sweep = 0; sweep < 400 && !settled; ++sweep) {
        settled = true;
        for (std::size_t i = 0; i < n; ++i) {
            auto [p, dp] = eval_poly(c, z[i]);
            if (p == cd(0.0)) continue;
            if (dp == cd(0.0)) {
                z[i] += cd(1e-6 * radius, 1e-6 * radius);
                settled = false;
                continue;
            }
            const cd w = p / dp;
            cd s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                cd diff = z[i] - z[j];
                if (diff == cd(0.0)) diff = cd(1e-12 * radius, 1e-12 * radius);
                s += 1.0 / diff;
            }
            const cd denom = 1.0 - w * s;
            const cd step = std::abs(denom) < 1e-300 ? w : w / denom;
            z[i] -= step;
            // This stage only localizes; the quad stage finishes. Demanding
            // more stalls on evaluation noise, and clustered roots stall at
            // the cluster radius (eps^(1/multiplicity), above 1e-4 already).
            if (std::abs(step) > std::max(1e-3, std::abs(z[i]) * 1e-8)) settled = false;
        }
    }
    if (!settled) return false;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = z[i].real();
    return true;
}

// Fallback: peel roots from the largest down. Newton started beyond the
// Cauchy bound converges monotonically for real-rooted monic polynomials.
bool deflation_roots(std::vector<double> c, std::vector<double>& out) {
    out.clear();
    while (c.size() > 2) {
        double x = root_radius(c);
        bool found = false;
        for (int it = 0; it < 300; ++it) {
            auto [p, dp] = eval_poly(c, x);
            if (dp == 0.0) break;
            const double step = p / dp;
            x -= step;
            if (std::abs(step) <= std::max(1e-3, std::abs(x) * 1e-8)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
        out.push_back(x);
        std::vector<double> q(c.size() - 1);  // synthetic division by (lambda - x)
        q.back() = c.back();
        for (std::size_t j = c.size() - 2; j >= 1; --j) q[j - 1] = c[j] + x * q[j];
        c = std::move(q);
    }
    if (c.size() == 2) out.push_back(-c[0] / c[1]);
    return true;
}

// Extended-precision simultaneous refinement, run in the complex plane even
// though every root is real: the 1/(z_i - z_j) repulsion is violent when two
// iterates collide on the real axis, but in the plane they slide past each
// other. Real-rooted inputs pull the imaginary parts back to ~0 once settled.
template <typename F>
void fp_aberth(const std::vector<F>& c, std::vector<cxf<F>>& z, int max_sweeps) {
    using C = cxf<F>;
    const F settle_rel = 100 * std::numeric_limits<F>::epsilon();
    const F settle_abs = std::numeric_limits<F>::epsilon();
    const std::size_t n = z.size();
    for (int sweep = 0, settled = 0; sweep < max_sweeps && !settled; ++sweep) {
        settled = 1;
        for (std::size_t i = 0; i < n; ++i) {
            C p{c.back(), F(0)}, dp{F(0), F(0)};
            for (std::size_t j = c.size() - 1; j-- > 0;) {
                dp = mul(dp, z[i]);
                dp.re += p.re;
                dp.im += p.im;
                p = mul(p, z[i]);
                p.re += c[j];
            }
            if (p.re == 0 && p.im == 0) continue;
            if (dp.re == 0 && dp.im == 0) {
                z[i].im += F(1e-20);
                settled = 0;
                continue;
            }
            const C w = div(p, dp);
            C s{F(0), F(0)};
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                C diff{z[i].re - z[j].re, z[i].im - z[j].im};
                if (diff.re == 0 && diff.im == 0) diff = {F(1e-25), F(1e-25)};
                const C inv = div(C{F(1), F(0)}, diff);
                s.re += inv.re;
                s.im += inv.im;
            }
            const C ws = mul(w, s);
            const C den{1 - ws.re, -ws.im};
            const C step = (den.re == 0 && den.im == 0) ? w : div(w, den);
            z[i].re -= step.re;
            z[i].im -= step.im;
            if (magnitude(step) > magnitude(z[i]) * settle_rel + settle_abs) settled = 0;
        }
    }
}

// Full pipeline on extended-precision coefficients; clamp_bits sets the
// negative floor.
template <typename F>
std::vector<double> roots_of(const std::vector<F>& coeffs, unsigned clamp_bits) {
    std::vector<F> c = coeffs;
    std::size_t zeros = 0;
    while (c.size() > 1 && c.front() == 0) {  // exact zero roots come off first
        c.erase(c.begin());
        ++zeros;
    }

    std::vector<double> roots;
    if (c.size() > 1) {
        const std::size_t deg = c.size() - 1;
        std::vector<double> cd_(c.size());
        for (std::size_t j = 0; j < c.size(); ++j) cd_[j] = static_cast<double>(c[j]);

        std::vector<cxf<F>> z(deg);
        if (aberth_roots(cd_, roots) || deflation_roots(cd_, roots)) {
            // Lift off the real axis slightly so close approximations repel
            // around each other instead of through each other.
            for (std::size_t i = 0; i < deg; ++i)
                z[i] = {F(roots[i]), F((std::abs(roots[i]) + 1.0) * 1e-12)};
            fp_aberth(c, z, 200);
        } else {
            // Double arithmetic could not even localize (deep coefficient
            // conditioning); iterate purely in extended precision from ring
            // seeds. Coefficient logs come from the wide values so the seed
            // geometry survives coefficients beyond double range.
            std::vector<double> lg(c.size());
            double cap = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j) {
                lg[j] = c[j] == 0 ? -std::numeric_limits<double>::infinity()
                                  : static_cast<double>(log(abs(c[j])));
                if (j < deg)
                    cap = std::max(cap, std::exp(lg[j] / static_cast<double>(deg - j)));
            }
            const std::vector<cd> seeds = ring_seeds(seed_moduli(lg), 2.0 * cap + 1e-12);
            for (std::size_t i = 0; i < deg; ++i)
                z[i] = {F(seeds[i].real()), F(seeds[i].imag())};
            fp_aberth(c, z, 2000);
        }

        // Vieta residual |sum(roots) + c_{n-1}|: loose enough for the stall
        // radius of repeated roots, tight enough to expose a junk root set.
        // Residual imaginary mass counts too; the true roots are all real.
        cxf<F> sum{F(0), F(0)};
        for (const cxf<F>& zi : z) {
            sum.re += zi.re;
            sum.im += zi.im;
        }
        if (abs(sum.re + c[deg - 1]) + abs(sum.im) > (1 + abs(c[deg - 1])) * F(1e-6))
            throw numeric_error("poly_roots: root iteration did not converge");

        roots.resize(deg);
        for (std::size_t i = 0; i < deg; ++i) roots[i] = static_cast<double>(z[i].re);
    }
    roots.insert(roots.end(), zeros, 0.0);

    const double floor = -std::ldexp(1.0, -static_cast<int>(clamp_bits));
    for (double& r : roots) {
        if (r >= 0.0) continue;
        if (r < floor)
            throw numeric_error("poly_roots: root below the negative clamp; input was not PSD");
        r = 0.0;
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

void require_charpoly_input(const ComplexMatrix& y, const char* who) {
    if (!y.is_square() || y.rows() == 0)
        throw argument_error(std::string(who) + ": matrix must be square and nonempty");
    if (y.rows() > kTnaMaxSide)
        throw capacity_error(std::string(who) +
                             ": side exceeds the characteristic-polynomial cap");
}

}  // namespace

CharPoly char_poly(const ComplexMatrix& y) {
    require_charpoly_input(y, "char_poly");
    if (!y.is_hermitian(1e-9))
        throw argument_error("char_poly: real coefficients require a Hermitian matrix");

    std::vector<quad_float> c = charpoly_fp<quad_float>(y);
    CharPoly p;
    p.degree = y.rows();
    p.coeffs.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) p.coeffs[j] = static_cast<double>(c[j]);
    return p;
}

std::vector<double> poly_roots(const CharPoly& p, unsigned k) {
    if (p.coeffs.size() != p.degree + 1)
        throw argument_error("poly_roots: coefficient count does not match the degree");
    if (std::abs(p.coeffs.back() - 1.0) > 1e-12)
        throw argument_error("poly_roots: polynomial must be monic");
    // The given double coefficients convert exactly; quad then resolves the
    // roots of that exact polynomial regardless of degree.
    std::vector<quad_float> c(p.coeffs.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = quad_float(p.coeffs[j]);
    return roots_of(c, k);
}

double tna(const ComplexMatrix& x, unsigned k) {
    if (!x.is_square() || x.rows() == 0)
        throw argument_error("tna: matrix must be square and nonempty");
    if (k > kTnaMaxBits)
        throw precision_error("tna: requested precision exceeds the double-precision ceiling");
    require_charpoly_input(x, "tna");

    ComplexMatrix y = x * x.adjoint();
    // Clamp well below 2^-k: a root this negative signals real precision
    // loss, not the usual rounding of a zero eigenvalue.
    const unsigned clamp_bits = std::min(2 * k + 10, 60u);
    // Root extraction from coefficients amplifies coefficient rounding by
    // the root condition number, which climbs steeply with the degree; wide
    // sides get the octuple path to keep the 2^-k budget.
    const std::vector<double> lambdas =
        y.rows() <= 16 ? roots_of(charpoly_fp<quad_float>(y), clamp_bits)
                       : roots_of(charpoly_fp<oct_float>(y), clamp_bits);
    double half_sum = 0.0;
    for (double lambda : lambdas)
        half_sum += 0.5 * std::sqrt(std::max(lambda, 0.0));
    return half_sum;
}

}  // namespace qsd
