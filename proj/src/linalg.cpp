#include "qsd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/kernels.hpp"

namespace qsd {

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    std::size_t rows = a.rows() * b.rows();
    std::size_t cols = a.cols() * b.cols();
    if (a.rows() == 0 || b.rows() == 0 || a.cols() == 0 || b.cols() == 0)
        throw argument_error("tensor: empty operand");
    std::size_t cap = config::max_matrix_dim();
    if (rows > cap || cols > cap)
        throw capacity_error("tensor: result " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " exceeds the matrix dimension cap " +
                             std::to_string(cap));
    ComplexMatrix out(rows, cols);
    kernels::active().kron(out.data(), a.data(), a.rows(), a.cols(), b.data(), b.rows(),
                           b.cols());
    return out;
}

namespace {

// Row offsets contributed by one subset of subsystems. Subsystems are ordered
// most significant first, so stride[i] = product of dims after i. The offsets
// for a composite index enumerate the subset's digits with the last subset
// member least significant, matching how the kept block is laid out.
std::vector<std::size_t> composite_offsets(const std::vector<std::size_t>& dims,
                                           const std::vector<std::size_t>& stride,
                                           const std::vector<std::size_t>& subset) {
    std::size_t total = 1;
    for (std::size_t i : subset) total *= dims[i];
    std::vector<std::size_t> out(total);
    for (std::size_t v = 0; v < total; ++v) {
        std::size_t rem = v;
        std::size_t off = 0;
        for (std::size_t k = subset.size(); k-- > 0;) {
            std::size_t d = dims[subset[k]];
            off += (rem % d) * stride[subset[k]];
            rem /= d;
        }
        out[v] = off;
    }
    return out;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    if (!rho.is_square()) throw argument_error("partial_trace: matrix must be square");
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw argument_error("partial_trace: zero subsystem dimension");
        total *= d;
    }
    if (total != rho.rows())
        throw argument_error("partial_trace: dimensions multiply to " + std::to_string(total) +
                             ", matrix side is " + std::to_string(rho.rows()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= dims.size()) throw argument_error("partial_trace: keep index out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw argument_error("partial_trace: keep indices must be strictly increasing");
    }

    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    std::vector<std::size_t> traced;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);

    std::vector<std::size_t> keep_off = composite_offsets(dims, stride, keep);
    std::vector<std::size_t> traced_off = composite_offsets(dims, stride, traced);

    std::size_t dim_keep = keep_off.size();
    ComplexMatrix out(dim_keep, dim_keep);
    for (std::size_t i = 0; i < dim_keep; ++i)
        for (std::size_t j = 0; j < dim_keep; ++j) {
            cplx acc = 0.0;
            for (std::size_t t : traced_off) acc += rho(keep_off[i] + t, keep_off[j] + t);
            out(i, j) = acc;
        }
    return out;
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double acc = 0.0;
    std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) acc += std::norm(a(i, j));
    return std::sqrt(2.0 * acc);
}

// Cyclic Jacobi on a Hermitian matrix. The pivot phase is absorbed into the
// rotation, so each 2x2 step reduces to the real symmetric update: with
// b = a_pq = |b| e^{i theta}, tau = (a_qq - a_pp) / (2|b|), t the smaller root
// of t^2 + 2 tau t - 1 = 0, the plane rotation [[c, s], [-conj(s), c]] with
// s = t c e^{i theta} zeroes the pivot and moves the diagonal by -t|b| / +t|b|.
// Only the rows of `a` are rotated; columns are restored from hermiticity.
// `vt` (may be null) accumulates eigenvectors as rows.
void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* vt) {
    const std::size_t n = a.rows();
    const kernels::Kernels& k = kernels::active();

    // Symmetrize once so roundoff in the input cannot bias the sweeps.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
    }

    double scale = a.frobenius_norm();
    if (scale == 0.0) return;
    const double stop = scale * 1e-14;
    const double rot_floor = stop / static_cast<double>(n);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(a) <= stop) return;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                cplx b = a(p, q);
                double babs = std::abs(b);
                if (babs <= rot_floor) continue;

                double ad = a(p, p).real();
                double dd = a(q, q).real();
                double tau = (dd - ad) / (2.0 * babs);
                double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                cplx phase = b / babs;
                cplx s = t * c * phase;

                k.rotate_rows(a.data() + p * n, a.data() + q * n, n, c, -s, std::conj(s));
                a(p, p) = ad - t * babs;
                a(q, q) = dd + t * babs;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == p || j == q) continue;
                    a(j, p) = std::conj(a(p, j));
                    a(j, q) = std::conj(a(q, j));
                }

                if (vt)
                    k.rotate_rows(vt->data() + p * n, vt->data() + q * n, n, c, -std::conj(s),
                                  s);
            }
    }
    throw numeric_error("hermitian_eig: Jacobi sweeps did not converge");
}

void require_hermitian(const ComplexMatrix& w, const char* who) {
    if (!w.is_square()) throw argument_error(std::string(who) + ": matrix must be square");
    double tol = 1e-9 * std::max(1.0, w.max_abs());
    if (!w.is_hermitian(tol)) throw argument_error(std::string(who) + ": matrix is not Hermitian");
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
    return order;
}

}  // namespace

Eig hermitian_eig(const ComplexMatrix& w) {
    require_hermitian(w, "hermitian_eig");
    std::size_t n = w.rows();
    ComplexMatrix a = w;
    ComplexMatrix vt = ComplexMatrix::identity(n);
    jacobi_diagonalize(a, &vt);

    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = a(i, i).real();
    std::vector<std::size_t> order = descending_order(raw);

    Eig out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = raw[order[j]];
        // Accumulated vt holds eigenvectors as rows; transpose while permuting.
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vt(order[j], i);
    }
    return out;
}

std::vector<double> hermitian_eigvalues(const ComplexMatrix& w) {
    require_hermitian(w, "hermitian_eigvalues");
    std::size_t n = w.rows();
    ComplexMatrix a = w;
    jacobi_diagonalize(a, nullptr);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
    std::sort(values.begin(), values.end(), std::greater<double>());
    return values;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a) {
    Eig eig = hermitian_eig(a);
    std::size_t n = a.rows();
    for (double& v : eig.values) {
        if (v < -1e-9)
            throw argument_error("matrix_sqrt_psd: eigenvalue " + std::to_string(v) +
                                 " is negative");
        v = (v < 0.0) ? 0.0 : std::sqrt(v);
    }
    // V diag(sqrt(w)) V(dagger), with the diagonal folded into a column scale.
    ComplexMatrix scaled = eig.vectors;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= eig.values[j];
    return scaled * eig.vectors.adjoint();
}

double trace_norm(const ComplexMatrix& x) {
    if (!x.is_square() || x.rows() == 0)
        throw argument_error("trace_norm: matrix must be square and nonempty");
    if (x.is_hermitian(1e-9 * std::max(1.0, x.max_abs()))) {
        double acc = 0.0;
        for (double v : hermitian_eigvalues(x)) acc += std::abs(v);
        return 0.5 * acc;
    }
    double acc = 0.0;
    for (double v : hermitian_eigvalues(x.adjoint() * x)) acc += std::sqrt(std::max(v, 0.0));
    return 0.5 * acc;
}

bool is_density(const ComplexMatrix& rho, double tol) {
    if (!rho.is_square() || rho.rows() == 0) return false;
    if (!rho.is_hermitian(tol)) return false;
    if (std::abs(rho.trace() - cplx(1.0)) > tol) return false;
    std::vector<double> w = hermitian_eigvalues(rho);
    return w.back() >= -tol;
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& xi) {
    if (!is_density(rho) || !is_density(xi))
        throw argument_error("fidelity: both arguments must be density matrices");
    if (rho.rows() != xi.rows()) throw argument_error("fidelity: dimension mismatch");
    ComplexMatrix sr = matrix_sqrt_psd(rho);
    ComplexMatrix inner = sr * xi * sr;
    double acc = 0.0;
    for (double v : hermitian_eigvalues(inner)) acc += std::sqrt(std::max(v, 0.0));
    return std::clamp(acc, 0.0, 1.0);
}

Svd svd(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw argument_error("svd: empty matrix");
    if (a.rows() < a.cols()) {
        Svd flipped = svd(a.adjoint());
        return Svd{std::move(flipped.v), std::move(flipped.singular_values),
                   std::move(flipped.u)};
    }
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    Eig gram = hermitian_eig(a.adjoint() * a);
    Svd out;
    out.singular_values.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        out.singular_values[j] = std::sqrt(std::max(gram.values[j], 0.0));
    out.v = std::move(gram.vectors);

    // Going through the Gram matrix squares the conditioning, so eigenvalues
    // of true zeros surface at the eps * lambda_max noise floor and their
    // square roots at sigma_max * sqrt(eps). Cut the numerical rank there.
    double smax = out.singular_values.empty() ? 0.0 : out.singular_values[0];
    double tol = smax * std::sqrt(static_cast<double>(m)) * 1.5e-8;

    // u_j = A v_j / sigma_j where sigma is safely nonzero; the remaining
    // columns are completed to an orthonormal basis from standard vectors.
    out.u = ComplexMatrix(m, m);
    ComplexMatrix av = a * out.v;
    std::size_t rank = 0;
    while (rank < n && out.singular_values[rank] > tol) ++rank;
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = av(i, j) / out.singular_values[j];

    auto project_out = [&](std::vector<cplx>& col, std::size_t upto) {
        for (std::size_t j = 0; j < upto; ++j) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < m; ++i) dot += std::conj(out.u(i, j)) * col[i];
            for (std::size_t i = 0; i < m; ++i) col[i] -= dot * out.u(i, j);
        }
    };

    // Near-degenerate tiny eigenvalues can leave the leading columns slightly
    // skewed; re-orthonormalize them in order before completing the basis.
    for (std::size_t j = 0; j < rank; ++j) {
        std::vector<cplx> col(m);
        for (std::size_t i = 0; i < m; ++i) col[i] = out.u(i, j);
        project_out(col, j);
        project_out(col, j);
        double nrm = 0.0;
        for (const cplx& v : col) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) throw numeric_error("svd: left basis collapsed");
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = col[i] / nrm;
    }

    std::size_t filled = rank;
    for (std::size_t cand = 0; cand < m && filled < m; ++cand) {
        std::vector<cplx> col(m, 0.0);
        col[cand] = 1.0;
        project_out(col, filled);
        project_out(col, filled);
        double nrm = 0.0;
        for (const cplx& v : col) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) continue;
        for (std::size_t i = 0; i < m; ++i) out.u(i, filled) = col[i] / nrm;
        ++filled;
    }
    if (filled < m) throw numeric_error("svd: failed to complete an orthonormal basis");
    return out;
}

}  // namespace qsd
