#include "qsd/states.hpp"

#include <algorithm>

#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/linalg.hpp"

namespace qsd {

namespace {

std::size_t state_width(const StateVector& psi) {
    std::size_t dim = psi.dim();
    if (dim == 0 || (dim & (dim - 1)) != 0)
        throw argument_error("state dimension is not a power of two");
    std::size_t w = 0;
    while ((std::size_t{1} << w) < dim) ++w;
    return w;
}

}  // namespace

StateVector reorder_qubits(const StateVector& psi, const std::vector<std::size_t>& order) {
    const std::size_t w = state_width(psi);
    if (order.size() != w) throw argument_error("reorder_qubits: order size mismatch");
    std::vector<bool> seen(w, false);
    for (std::size_t q : order) {
        if (q >= w || seen[q]) throw argument_error("reorder_qubits: order is not a permutation");
        seen[q] = true;
    }
    StateVector out(psi.dim());
    for (std::size_t old = 0; old < psi.dim(); ++old) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < w; ++i)
            idx |= ((old >> (w - 1 - order[i])) & 1) << (w - 1 - i);
        out.amps[idx] = psi.amps[old];
    }
    return out;
}

StateVector prepare_pure(const Circuit& c) {
    validate_circuit(c);
    return apply_circuit(zero_state(c.width), c);
}

ComplexMatrix prepare_mixed(const Circuit& c) {
    if (c.outputs.empty()) throw argument_error("prepare_mixed: circuit has no outputs");
    const std::size_t k = c.outputs.size();
    const std::size_t keep_dim = std::size_t{1} << k;
    if (keep_dim > config::max_matrix_dim())
        throw capacity_error("prepare_mixed: output density exceeds the matrix dimension cap");

    StateVector psi = prepare_pure(c);

    // Move outputs to the most significant positions, then the reshaped
    // amplitudes factor as a keep x env matrix whose Gram product is the
    // reduced density matrix.
    std::vector<std::size_t> order = c.outputs;
    std::vector<bool> is_output(c.width, false);
    for (std::size_t q : c.outputs) is_output[q] = true;
    for (std::size_t q = 0; q < c.width; ++q)
        if (!is_output[q]) order.push_back(q);
    psi = reorder_qubits(psi, order);

    const std::size_t env_dim = psi.dim() / keep_dim;
    ComplexMatrix phi(keep_dim, env_dim);
    std::copy(psi.amps.begin(), psi.amps.end(), phi.data());
    return phi * phi.adjoint();
}

QsdVerdict decide_qsd(const QsdInstance& inst) {
    if (!(inst.alpha >= 0.0 && inst.alpha < 1.0))
        throw argument_error("decide_qsd: alpha must lie in [0,1)");
    if (!(inst.beta > 0.0 && inst.beta <= 1.0))
        throw argument_error("decide_qsd: beta must lie in (0,1]");
    if (!(inst.alpha < inst.beta)) throw argument_error("decide_qsd: alpha must be below beta");
    if (inst.q0.outputs.size() != inst.q1.outputs.size())
        throw argument_error("decide_qsd: generators disagree on output size");

    ComplexMatrix rho0 = prepare_mixed(inst.q0);
    ComplexMatrix rho1 = prepare_mixed(inst.q1);
    const double d = trace_norm(rho0 - rho1);
    if (d >= inst.beta) return {QsdOutcome::yes, d};
    if (d <= inst.alpha) return {QsdOutcome::no, d};
    return {QsdOutcome::promise_violated, d};
}

}  // namespace qsd
