#include "qsd/polarize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/linalg.hpp"

namespace qsd {

namespace {

// Snap values that are an integer up to 1e-9 relative error before rounding
// directionally; pow() noise must not shift a floor/ceil across an integer.
double snap_integer(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return r;
    return v;
}

void check_thresholds(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha < 1.0 && beta > 0.0 && beta <= 1.0))
        throw argument_error("polarization thresholds must satisfy 0 <= alpha < 1, 0 < beta <= 1");
    if (!(alpha < beta * beta))
        throw argument_error("polarization requires alpha < beta^2");
}

}  // namespace

PolarizationParams derive_polarization_params(double alpha, double beta, std::size_t n) {
    check_thresholds(alpha, beta);
    if (n == 0) throw argument_error("security parameter n must be positive");

    PolarizationParams p;
    p.n = n;
    p.alpha = alpha;
    p.beta = beta;
    if (alpha == 0.0) {
        p.r = 1;
        p.s = kMaxAmplifyCopies;
        p.s_capped = true;
        return p;
    }
    const double ratio = beta * beta / alpha;
    const double rx = snap_integer(std::log(8.0 * static_cast<double>(n)) / std::log(ratio));
    p.r = static_cast<std::size_t>(std::max(1.0, std::ceil(rx)));

    const double sx = snap_integer(std::pow(alpha, -static_cast<double>(p.r)) / 2.0);
    if (sx >= static_cast<double>(kMaxAmplifyCopies)) {
        p.s = kMaxAmplifyCopies;
        p.s_capped = true;
    } else {
        p.s = static_cast<std::size_t>(std::max(1.0, std::floor(sx)));
    }
    return p;
}

namespace {

// Relabel so the k outputs sit on qubits 0..k-1 in order and pad to `width`.
// The prepared output density matrix is unchanged.
Circuit canonicalize(const Circuit& c, std::size_t width) {
    const std::size_t k = c.outputs.size();
    std::vector<std::size_t> wire_map(c.width);
    std::vector<bool> is_output(c.width, false);
    for (std::size_t i = 0; i < k; ++i) {
        wire_map[c.outputs[i]] = i;
        is_output[c.outputs[i]] = true;
    }
    std::size_t next = k;
    for (std::size_t q = 0; q < c.width; ++q)
        if (!is_output[q]) wire_map[q] = next++;

    Circuit out;
    out.width = width;
    for (std::size_t i = 0; i < k; ++i) out.outputs.push_back(i);
    append(out, c, wire_map);
    return out;
}

void check_circuit_capacity(std::size_t width, const char* who) {
    if (width > kMaxCircuitQubits)
        throw capacity_error(std::string(who) + ": materialized circuit would need " +
                             std::to_string(width) + " qubits (cap " +
                             std::to_string(kMaxCircuitQubits) + ")");
}

}  // namespace

std::pair<Circuit, Circuit> xor_transform(const Circuit& q0, const Circuit& q1, std::size_t r) {
    validate_circuit(q0);
    validate_circuit(q1);
    if (q0.outputs.size() != q1.outputs.size())
        throw argument_error("xor_transform: generators disagree on output size");
    if (q0.outputs.empty()) throw argument_error("xor_transform: generators have no outputs");
    if (r == 0) throw argument_error("xor_transform: r must be positive");

    const std::size_t w = std::max(q0.width, q1.width);
    const std::size_t k = q0.outputs.size();
    Circuit c0 = canonicalize(q0, w);
    Circuit c1 = canonicalize(q1, w);
    if (r == 1) return {c0, c1};

    check_circuit_capacity(r + r * w, "xor_transform");

    // Layout: r-1 control ancillas, one parity ancilla, then r blocks of w.
    // Ancillas are never outputs; pointer-state orthogonality makes the
    // reduced output state the exact classical mixture over branch choices.
    const std::size_t parity = r - 1;
    auto build = [&](bool offset) {
        Circuit out;
        out.width = r + r * w;
        for (std::size_t j = 0; j + 1 < r; ++j) out.gates.push_back(gates::h(j));
        if (offset) out.gates.push_back(gates::x(parity));
        for (std::size_t j = 0; j + 1 < r; ++j) out.gates.push_back(gates::cx(j, parity));
        for (std::size_t i = 0; i < r; ++i) {
            const std::size_t control = (i + 1 < r) ? i : parity;
            std::vector<std::size_t> wires(w);
            for (std::size_t j = 0; j < w; ++j) wires[j] = r + i * w + j;
            out.gates.push_back(gates::x(control));
            append_controlled(out, c0, control, wires);
            out.gates.push_back(gates::x(control));
            append_controlled(out, c1, control, wires);
        }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < k; ++j) out.outputs.push_back(r + i * w + j);
        return out;
    };
    return {build(false), build(true)};
}

std::pair<Circuit, Circuit> amplify_transform(const Circuit& q0, const Circuit& q1,
                                              std::size_t s) {
    validate_circuit(q0);
    validate_circuit(q1);
    if (s == 0) throw argument_error("amplify_transform: s must be positive");
    if (s == 1) return {q0, q1};
    check_circuit_capacity(s * std::max(q0.width, q1.width), "amplify_transform");

    Circuit r0 = q0, r1 = q1;
    for (std::size_t i = 1; i < s; ++i) {
        r0 = parallel(r0, q0);
        r1 = parallel(r1, q1);
    }
    return {r0, r1};
}

PolarizeResult polarize(const Circuit& q0, const Circuit& q1, std::size_t n, double alpha,
                        double beta,
                        std::optional<std::pair<std::size_t, std::size_t>> override_rs) {
    PolarizationParams params;
    if (override_rs) {
        check_thresholds(alpha, beta);
        if (n == 0) throw argument_error("security parameter n must be positive");
        if (override_rs->first == 0 || override_rs->second == 0)
            throw argument_error("polarize: overridden r and s must be positive");
        params = PolarizationParams{n, override_rs->first, override_rs->second, alpha, beta,
                                    false};
    } else {
        params = derive_polarization_params(alpha, beta, n);
    }

    auto [a0, a1] = xor_transform(q0, q1, params.r);
    auto [b0, b1] = amplify_transform(a0, a1, params.s);
    auto [c0, c1] = xor_transform(b0, b1, params.n);
    return {std::move(c0), std::move(c1), params};
}

ComplexMatrix tensor_power(const ComplexMatrix& rho, std::size_t s) {
    if (s == 0) throw argument_error("tensor_power: s must be positive");
    ComplexMatrix out = rho;
    for (std::size_t i = 1; i < s; ++i) out = tensor(out, rho);
    return out;
}

ComplexMatrix xor_mixture(const ComplexMatrix& rho0, const ComplexMatrix& rho1, std::size_t r,
                          bool offset) {
    if (r == 0) throw argument_error("xor_mixture: r must be positive");
    if (!rho0.is_square() || !rho1.is_square() || rho0.rows() != rho1.rows())
        throw argument_error("xor_mixture: operands must be square and equal-dimensional");
    const std::size_t branches = std::size_t{1} << (r - 1);
    const double weight = 1.0 / static_cast<double>(branches);
    ComplexMatrix acc;
    for (std::size_t b = 0; b < branches; ++b) {
        unsigned parity = offset ? 1u : 0u;
        ComplexMatrix term = ComplexMatrix::identity(1);
        for (std::size_t i = 0; i + 1 < r; ++i) {
            const unsigned bit = (b >> (r - 2 - i)) & 1u;
            parity ^= bit;
            term = tensor(term, bit ? rho1 : rho0);
        }
        term = tensor(term, parity ? rho1 : rho0);
        if (b == 0)
            acc = std::move(term);
        else
            acc += term;
    }
    acc *= cplx(weight);
    return acc;
}

std::pair<ComplexMatrix, ComplexMatrix> polarize_states(const ComplexMatrix& rho0,
                                                        const ComplexMatrix& rho1,
                                                        const PolarizationParams& params) {
    ComplexMatrix a0 = xor_mixture(rho0, rho1, params.r, false);
    ComplexMatrix a1 = xor_mixture(rho0, rho1, params.r, true);
    ComplexMatrix b0 = tensor_power(a0, params.s);
    ComplexMatrix b1 = tensor_power(a1, params.s);
    return {xor_mixture(b0, b1, params.n, false), xor_mixture(b0, b1, params.n, true)};
}

std::pair<double, double> polarize_bounds(double d_in, const PolarizationParams& params) {
    if (!(d_in >= 0.0 && d_in <= 1.0))
        throw argument_error("polarize_bounds: distance must lie in [0,1]");
    const double d1 = std::pow(d_in, static_cast<double>(params.r));
    const double s = static_cast<double>(params.s);
    // More copies never shrink the distance (discard copies to get one back),
    // so the single-copy value also lower-bounds the amplified distance.
    const double lo_amp = std::max(d1, 1.0 - std::exp(-0.5 * s * d1 * d1));
    const double hi_amp = std::min(1.0, s * d1);
    const double nn = static_cast<double>(params.n);
    return {std::pow(lo_amp, nn), std::pow(hi_amp, nn)};
}

std::string polarization_header(const PolarizationParams& params) {
    std::ostringstream os;
    char buf[64];
    os << "# polarization parameters\n";
    os << "#   n " << params.n << "\n";
    os << "#   r " << params.r << "\n";
    os << "#   s " << params.s << (params.s_capped ? "  (capped at maximum)" : "") << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", params.alpha);
    os << "#   alpha " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", params.beta);
    os << "#   beta " << buf << "\n";
    return os.str();
}

}  // namespace qsd
