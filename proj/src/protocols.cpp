#include "qsd/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/linalg.hpp"
#include "qsd/random.hpp"

namespace qsd {

ProverStrategy ProverStrategy::honest_optimal() { return {}; }

ProverStrategy ProverStrategy::fixed(ComplexMatrix u) {
    ProverStrategy s;
    s.kind = Kind::fixed_unitary;
    s.unitary = std::move(u);
    return s;
}

ProverStrategy ProverStrategy::channel(std::vector<ComplexMatrix> kraus) {
    ProverStrategy s;
    s.kind = Kind::fixed_channel;
    s.kraus = std::move(kraus);
    return s;
}

ProverStrategy ProverStrategy::randomized(std::uint64_t seed) {
    ProverStrategy s;
    s.kind = Kind::random;
    s.seed = seed;
    return s;
}

namespace {

void validate_kraus(const std::vector<ComplexMatrix>& kraus, std::size_t dim) {
    if (kraus.empty()) throw argument_error("prover channel has no Kraus operators");
    for (const ComplexMatrix& k : kraus)
        if (!k.is_square() || k.rows() != dim)
            throw argument_error("prover Kraus operator dimension mismatch");
    ComplexMatrix sum(dim, dim);
    for (const ComplexMatrix& k : kraus) sum += k.adjoint() * k;
    sum -= ComplexMatrix::identity(dim);
    if (sum.max_abs() > 1e-8)
        throw argument_error("prover Kraus operators do not satisfy completeness");
}

// The pipeline stages applied with explicit parameters; protocol runs take
// (r, s, n) at face value and do not require derivable thresholds.
std::pair<Circuit, Circuit> polarized_pair(const QsdInstance& inst,
                                           const PolarizationParams& params) {
    if (inst.q0.outputs.size() != inst.q1.outputs.size())
        throw argument_error("protocol instance generators disagree on output size");
    auto [a0, a1] = xor_transform(inst.q0, inst.q1, params.r);
    auto [b0, b1] = amplify_transform(a0, a1, params.s);
    return xor_transform(b0, b1, params.n);
}

ComplexMatrix choice_block_diag(const ComplexMatrix& m0, const ComplexMatrix& m1) {
    const std::size_t d = m0.rows();
    ComplexMatrix out(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            out(i, j) = 0.5 * m0(i, j);
            out(d + i, d + j) = 0.5 * m1(i, j);
        }
    return out;
}

// Probability that the first qubit of a register in state sigma reads 0.
double first_qubit_zero_prob(const ComplexMatrix& sigma) {
    double p = 0.0;
    for (std::size_t i = 0; i < sigma.rows() / 2; ++i) p += sigma(i, i).real();
    return std::clamp(p, 0.0, 1.0);
}

struct ClosenessSetup {
    StateVector phi;  // R0|0...0>, outputs moved to the most significant bits
    StateVector psi;  // R1|0...0>, same reorder
    std::size_t keep_dim;
    std::size_t env_dim;
    ComplexMatrix xi0;
    ComplexMatrix xi1;
};

StateVector outputs_first(const Circuit& c) {
    StateVector psi = prepare_pure(c);
    std::vector<std::size_t> order = c.outputs;
    std::vector<bool> is_output(c.width, false);
    for (std::size_t q : c.outputs) is_output[q] = true;
    for (std::size_t q = 0; q < c.width; ++q)
        if (!is_output[q]) order.push_back(q);
    return reorder_qubits(psi, order);
}

ClosenessSetup closeness_setup(const QsdInstance& inst, const PolarizationParams& params) {
    auto [r0, r1] = polarized_pair(inst, params);
    if (r0.width != r1.width)
        throw argument_error("closeness test requires equal-width generators");
    const std::size_t full_dim = std::size_t{1} << r0.width;
    if (full_dim > config::max_matrix_dim())
        throw capacity_error("closeness test views exceed the matrix dimension cap");

    ClosenessSetup s;
    s.keep_dim = std::size_t{1} << r0.outputs.size();
    s.env_dim = full_dim / s.keep_dim;
    s.phi = outputs_first(r0);
    s.psi = outputs_first(r1);

    ComplexMatrix phi_m(s.keep_dim, s.env_dim), psi_m(s.keep_dim, s.env_dim);
    std::copy(s.phi.amps.begin(), s.phi.amps.end(), phi_m.data());
    std::copy(s.psi.amps.begin(), s.psi.amps.end(), psi_m.data());
    s.xi0 = phi_m * phi_m.adjoint();
    s.xi1 = psi_m * psi_m.adjoint();
    return s;
}

// (I (x) K)|state> for the keep (x) env split.
StateVector apply_env(const StateVector& state, const ComplexMatrix& k, std::size_t keep_dim,
                      std::size_t env_dim) {
    StateVector out(state.dim());
    for (std::size_t i = 0; i < keep_dim; ++i)
        for (std::size_t j = 0; j < env_dim; ++j) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < env_dim; ++l)
                acc += k(j, l) * state.amps[i * env_dim + l];
            out.amps[i * env_dim + j] = acc;
        }
    return out;
}

}  // namespace

Helstrom helstrom(const ComplexMatrix& xi0, const ComplexMatrix& xi1) {
    if (xi0.rows() != xi1.rows()) throw argument_error("helstrom: dimension mismatch");
    if (!is_density(xi0) || !is_density(xi1))
        throw argument_error("helstrom: both arguments must be density matrices");

    Eig eig = hermitian_eig(xi0 - xi1);
    const std::size_t d = xi0.rows();
    Helstrom h;
    h.pi0 = ComplexMatrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        if (eig.values[j] < 0.0) continue;
        // Accumulate v v(dagger) for the nonnegative eigenspace (ties kept).
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                h.pi0(r, c) += eig.vectors(r, j) * std::conj(eig.vectors(c, j));
    }
    h.pi1 = ComplexMatrix::identity(d) - h.pi0;
    h.p_opt = 0.5 * ((h.pi0 * xi0).trace().real() + (h.pi1 * xi1).trace().real());
    return h;
}

UhlmannResult uhlmann_unitary(const StateVector& phi, const StateVector& psi,
                              std::size_t keep_dim, std::size_t env_dim) {
    if (keep_dim == 0 || env_dim == 0 || keep_dim * env_dim != phi.dim() ||
        phi.dim() != psi.dim())
        throw argument_error("uhlmann_unitary: split does not match state dimensions");

    ComplexMatrix phi_m(keep_dim, env_dim), psi_m(keep_dim, env_dim);
    std::copy(phi.amps.begin(), phi.amps.end(), phi_m.data());
    std::copy(psi.amps.begin(), psi.amps.end(), psi_m.data());

    // <psi|(I (x) U)|phi> = tr(M U^T) with M the env-side cross matrix; the
    // polar phase of M maximizes the trace at the sum of singular values.
    ComplexMatrix m = psi_m.adjoint() * phi_m;
    Svd s = svd(m);
    UhlmannResult out;
    out.unitary = (s.v * s.u.adjoint()).transpose();
    out.overlap = 0.0;
    for (double sv : s.singular_values) out.overlap += sv;
    return out;
}

ProtocolTranscript run_distance_test(const QsdInstance& inst, const ProverStrategy& prover,
                                     const PolarizationParams& params) {
    auto [r0, r1] = polarized_pair(inst, params);
    ComplexMatrix xi0 = prepare_mixed(r0);
    ComplexMatrix xi1 = prepare_mixed(r1);
    const std::size_t m = xi0.rows();
    if (2 * m > config::max_matrix_dim())
        throw capacity_error("distance test views exceed the matrix dimension cap");

    Helstrom opt = helstrom(xi0, xi1);

    // p[b][a]: probability the prover answers `a` when handed xi_b.
    double p[2][2];
    auto fill_from_unitary = [&](const ComplexMatrix& u) {
        if (!u.is_square() || u.rows() != m * m)
            throw argument_error("prover unitary must cover message plus private register");
        if (!u.is_unitary(1e-9)) throw argument_error("prover unitary is not unitary");
        ComplexMatrix ground(m, m);
        ground(0, 0) = 1.0;
        for (int b = 0; b < 2; ++b) {
            ComplexMatrix sigma = u * tensor(b ? xi1 : xi0, ground) * u.adjoint();
            p[b][0] = first_qubit_zero_prob(sigma);
            p[b][1] = 1.0 - p[b][0];
        }
    };
    switch (prover.kind) {
        case ProverStrategy::Kind::honest:
            for (int b = 0; b < 2; ++b) {
                p[b][0] = std::clamp((opt.pi0 * (b ? xi1 : xi0)).trace().real(), 0.0, 1.0);
                p[b][1] = 1.0 - p[b][0];
            }
            break;
        case ProverStrategy::Kind::fixed_unitary:
            fill_from_unitary(prover.unitary);
            break;
        case ProverStrategy::Kind::random: {
            Rng rng(prover.seed);
            fill_from_unitary(random_unitary(m * m, rng));
            break;
        }
        case ProverStrategy::Kind::fixed_channel: {
            validate_kraus(prover.kraus, m);
            for (int b = 0; b < 2; ++b) {
                ComplexMatrix sigma(m, m);
                for (const ComplexMatrix& k : prover.kraus)
                    sigma += k * (b ? xi1 : xi0) * k.adjoint();
                p[b][0] = first_qubit_zero_prob(sigma);
                p[b][1] = 1.0 - p[b][0];
            }
            break;
        }
    }

    ProtocolTranscript t;
    t.protocol = "distance-test";
    t.params = params;
    t.views.push_back(choice_block_diag(xi0, xi1));
    ComplexMatrix answer0(2, 2), answer1(2, 2);
    answer0(0, 0) = p[0][0];
    answer0(1, 1) = p[0][1];
    answer1(0, 0) = p[1][0];
    answer1(1, 1) = p[1][1];
    t.views.push_back(choice_block_diag(answer0, answer1));
    t.acceptance = 0.5 * (p[0][0] + p[1][1]);
    t.optimal_acceptance = opt.p_opt;
    t.distance = trace_norm(xi0 - xi1);
    t.fidelity_value = fidelity(xi0, xi1);
    t.completeness_error = 1.0 - t.optimal_acceptance;
    t.view_gap_bound = t.completeness_error;
    return t;
}

ProtocolTranscript run_closeness_test(const QsdInstance& inst, const ProverStrategy& prover,
                                      const PolarizationParams& params) {
    ClosenessSetup s = closeness_setup(inst, params);

    std::vector<ComplexMatrix> kraus;
    switch (prover.kind) {
        case ProverStrategy::Kind::honest:
            kraus.push_back(uhlmann_unitary(s.phi, s.psi, s.keep_dim, s.env_dim).unitary);
            break;
        case ProverStrategy::Kind::fixed_unitary:
            if (!prover.unitary.is_square() || prover.unitary.rows() != s.env_dim)
                throw argument_error("prover unitary must act on the environment register");
            if (!prover.unitary.is_unitary(1e-9))
                throw argument_error("prover unitary is not unitary");
            kraus.push_back(prover.unitary);
            break;
        case ProverStrategy::Kind::random: {
            Rng rng(prover.seed);
            kraus.push_back(random_unitary(s.env_dim, rng));
            break;
        }
        case ProverStrategy::Kind::fixed_channel:
            validate_kraus(prover.kraus, s.env_dim);
            kraus = prover.kraus;
            break;
    }

    double acceptance = 0.0;
    ComplexMatrix view2(s.phi.dim(), s.phi.dim());
    for (const ComplexMatrix& k : kraus) {
        StateVector moved = apply_env(s.phi, k, s.keep_dim, s.env_dim);
        acceptance += std::norm(inner(s.psi, moved));
        view2 += outer(moved);
    }

    ProtocolTranscript t;
    t.protocol = "closeness-test";
    t.params = params;
    t.views.push_back(outer(s.phi));
    t.views.push_back(std::move(view2));
    t.acceptance = std::clamp(acceptance, 0.0, 1.0);
    t.fidelity_value = fidelity(s.xi0, s.xi1);
    t.optimal_acceptance = t.fidelity_value * t.fidelity_value;
    t.distance = trace_norm(s.xi0 - s.xi1);
    t.completeness_error = 1.0 - t.optimal_acceptance;
    t.view_gap_bound = std::sqrt(std::max(0.0, 2.0 * (1.0 - t.fidelity_value)));
    return t;
}

std::vector<ComplexMatrix> simulator_views_distance(const QsdInstance& inst,
                                                    const PolarizationParams& params) {
    auto [r0, r1] = polarized_pair(inst, params);
    ComplexMatrix xi0 = prepare_mixed(r0);
    ComplexMatrix xi1 = prepare_mixed(r1);
    if (2 * xi0.rows() > config::max_matrix_dim())
        throw capacity_error("distance test views exceed the matrix dimension cap");
    ComplexMatrix guess0(2, 2), guess1(2, 2);
    guess0(0, 0) = 1.0;  // the simulated prover answers the chosen bit
    guess1(1, 1) = 1.0;
    return {choice_block_diag(xi0, xi1), choice_block_diag(guess0, guess1)};
}

std::vector<ComplexMatrix> simulator_views_closeness(const QsdInstance& inst,
                                                     const PolarizationParams& params) {
    ClosenessSetup s = closeness_setup(inst, params);
    return {outer(s.phi), outer(s.psi)};
}

}  // namespace qsd
