#include "qsd/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/linalg.hpp"
#include "qsd/polarize.hpp"

#include "circuit_parse.hpp"
#include "parse_util.hpp"

namespace qsd {

void validate_proof_system(const ProofSystemSpec& ps) {
    if (ps.qv == 0) throw argument_error("proof system needs at least one verifier qubit");
    if (ps.messages < 2 || ps.messages % 2 != 0)
        throw argument_error("message count must be even and at least 2");
    if (ps.outbit >= ps.qv)
        throw argument_error("output qubit index lies outside the verifier register");
    if (ps.verifiers.size() != ps.rounds())
        throw argument_error("expected " + std::to_string(ps.rounds()) + " verifier circuits, got " +
                             std::to_string(ps.verifiers.size()));
    if (ps.provers.size() != ps.messages / 2)
        throw argument_error("expected " + std::to_string(ps.messages / 2) +
                             " prover circuits, got " + std::to_string(ps.provers.size()));
    for (const Circuit& v : ps.verifiers) {
        if (v.width != ps.qv + ps.qm)
            throw argument_error("verifier circuits must act on the verifier and message registers");
        validate_circuit(v);
    }
    for (const Circuit& p : ps.provers) {
        if (p.width != ps.qm + ps.qp)
            throw argument_error("prover circuits must act on the message and private registers");
        validate_circuit(p);
    }
}

namespace {

// The honest run of the first j messages; no validation, callers check.
Circuit build_interaction(const ProofSystemSpec& ps, std::size_t j) {
    Circuit c;
    c.width = ps.qv + ps.qm + ps.qp;
    std::vector<std::size_t> vm(ps.qv + ps.qm), mp(ps.qm + ps.qp);
    for (std::size_t i = 0; i < vm.size(); ++i) vm[i] = i;
    for (std::size_t i = 0; i < mp.size(); ++i) mp[i] = ps.qv + i;
    for (std::size_t msg = 1; msg <= j; ++msg) {
        if (msg % 2 == 1)
            append(c, ps.verifiers[(msg - 1) / 2], vm);
        else
            append(c, ps.provers[msg / 2 - 1], mp);
    }
    for (std::size_t q = 0; q < ps.qv + ps.qm; ++q) c.outputs.push_back(q);
    return c;
}

Circuit sim_view_circuit(const ProofSystemSpec& ps, const SimulatorSpec& sim, std::size_t j) {
    if (sim.use_honest) return build_interaction(ps, j);
    auto it = sim.circuits.find(j);
    if (it == sim.circuits.end())
        throw argument_error("simulator does not provide the view after message " +
                             std::to_string(j));
    const Circuit& c = it->second;
    if (c.outputs.size() != ps.qv + ps.qm)
        throw argument_error("simulator view after message " + std::to_string(j) +
                             " must output the verifier and message registers");
    validate_circuit(c);
    return c;
}

// Projects the acceptance bit out of a density on the V+M registers.
double accept_probability(const ComplexMatrix& view, const ProofSystemSpec& ps) {
    const std::size_t bit = std::size_t{1} << (ps.qv + ps.qm - 1 - ps.outbit);
    double p = 0.0;
    for (std::size_t i = 0; i < view.rows(); ++i)
        if (i & bit) p += view(i, i).real();
    return p;
}

}  // namespace

Circuit interaction_circuit(const ProofSystemSpec& ps, std::size_t j) {
    validate_proof_system(ps);
    if (j > ps.messages) throw argument_error("message index exceeds the message count");
    return build_interaction(ps, j);
}

ComplexMatrix compute_view(const ProofSystemSpec& ps, std::size_t j) {
    return prepare_mixed(interaction_circuit(ps, j));
}

double max_accept_exact(const ProofSystemSpec& ps) {
    validate_proof_system(ps);
    if (ps.messages != 2)
        throw unsupported_error("exact acceptance optimum is implemented for two-message systems");

    const std::size_t dv = std::size_t{1} << ps.qv;
    const std::size_t dm = std::size_t{1} << ps.qm;

    // Verifier residual after the first message.
    StateVector phi = prepare_pure(ps.verifiers[0]);
    ComplexMatrix phi_m(dv, dm);
    std::copy(phi.amps.begin(), phi.amps.end(), phi_m.data());
    ComplexMatrix rho_v = phi_m * phi_m.adjoint();

    // Acceptance operator pulled back before the last verifier turn:
    // zero the rejecting rows of U2 and square up.
    ComplexMatrix pu = circuit_unitary(ps.verifiers[1]);
    const std::size_t d = pu.rows();
    const std::size_t bit = std::size_t{1} << (ps.qv + ps.qm - 1 - ps.outbit);
    for (std::size_t r = 0; r < d; ++r) {
        if (r & bit) continue;
        for (std::size_t c = 0; c < d; ++c) pu(r, c) = 0.0;
    }
    ComplexMatrix accept = pu.adjoint() * pu;

    // Compress onto supp(rho_v) (x) M; any prover-reachable state lives there.
    Eig ev = hermitian_eig(rho_v);
    std::size_t rank = 0;
    while (rank < dv && ev.values[rank] > 1e-9) ++rank;
    if (rank == 0) throw numeric_error("verifier residual has no support");
    ComplexMatrix basis(rank, dv);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t a = 0; a < dv; ++a) basis(i, a) = std::conj(ev.vectors(a, i));
    ComplexMatrix t = tensor(basis, ComplexMatrix::identity(dm));
    ComplexMatrix ar = t * accept * t.adjoint();

    if (rank == 1) {
        // Pure residual: every extension is a product, so the optimum is the
        // largest eigenvalue of the compressed acceptance operator.
        return std::clamp(hermitian_eigvalues(ar).front(), 0.0, 1.0);
    }

    Eig ea = hermitian_eig(ar);
    const double lam1 = ea.values.front();
    if (lam1 <= 1e-12) return 0.0;
    const bool rank_one = ea.values.size() < 2 || ea.values[1] <= 1e-9;
    if (!rank_one || rank > dm)
        throw unsupported_error("two-message optimum is outside the closed-form regimes");

    // Rank-one acceptance lam1 |a><a|: the best extension overlap with a pure
    // state is the squared fidelity of the reduced states.
    ComplexMatrix ahat(rank, dm);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < dm; ++j) ahat(i, j) = ea.vectors(i * dm + j, 0);
    ComplexMatrix rho_a = ahat * ahat.adjoint();

    double kept = 0.0;
    for (std::size_t i = 0; i < rank; ++i) kept += ev.values[i];
    ComplexMatrix rho_vc(rank, rank);
    for (std::size_t i = 0; i < rank; ++i) rho_vc(i, i) = ev.values[i] / kept;

    const double f = fidelity(rho_vc, rho_a);
    return std::clamp(lam1 * f * f, 0.0, 1.0);
}

std::pair<Circuit, Circuit> build_qsd(const ProofSystemSpec& ps, const SimulatorSpec& sim) {
    validate_proof_system(ps);
    const std::size_t k = ps.rounds();

    std::vector<Circuit> g0, g1;
    for (std::size_t i = 1; i <= k - 1; ++i) {
        // Stand-in view advanced by one verifier turn.
        Circuit adv;
        if (i == 1) {
            adv.width = ps.qv + ps.qm;
            for (std::size_t q = 0; q < adv.width; ++q) adv.outputs.push_back(q);
        } else {
            adv = sim_view_circuit(ps, sim, 2 * (i - 1));
        }
        append(adv, ps.verifiers[i - 1], adv.outputs);
        adv.outputs.resize(ps.qv);
        g1.push_back(std::move(adv));

        if (i <= k - 2) {
            Circuit c = sim_view_circuit(ps, sim, 2 * i);
            c.outputs.resize(ps.qv);
            g0.push_back(std::move(c));
            continue;
        }
        // Final stand-in view, pulled back through an acceptance-forced last
        // verifier turn: run the turn, swap the output qubit for a fresh |1>
        // ancilla (old qubit demoted to non-output), undo the turn.
        Circuit c = sim_view_circuit(ps, sim, ps.messages);
        const std::vector<std::size_t> vm = c.outputs;
        append(c, ps.verifiers[k - 1], vm);
        const std::size_t anc = c.width++;
        c.gates.push_back(gates::x(anc));
        c.gates.push_back(gates::swap(vm[ps.outbit], anc));
        append(c, circuit_adjoint(ps.verifiers[k - 1]), vm);
        c.outputs.resize(ps.qv);
        g0.push_back(std::move(c));
    }

    Circuit q0 = std::move(g0.front());
    Circuit q1 = std::move(g1.front());
    for (std::size_t i = 1; i < g0.size(); ++i) q0 = parallel(q0, g0[i]);
    for (std::size_t i = 1; i < g1.size(); ++i) q1 = parallel(q1, g1[i]);
    if (q0.width > kMaxCircuitQubits || q1.width > kMaxCircuitQubits)
        throw capacity_error("reduction circuits exceed the circuit width cap");
    return {std::move(q0), std::move(q1)};
}

QsdReduction reduce_to_qsd(const ProofSystemSpec& ps, const SimulatorSpec& sim, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw argument_error("acceptance bound must lie in [0, 1]");
    auto [q0, q1] = build_qsd(ps, sim);

    QsdReduction r;
    r.epsilon = epsilon;
    const double rt = 1.0 - std::sqrt(epsilon);
    r.gap_bound = rt * rt / (3.0 * static_cast<double>(ps.rounds() - 1));
    r.instance.q0 = std::move(q0);
    r.instance.q1 = std::move(q1);
    r.instance.alpha = 1e-3;
    r.instance.beta = std::clamp(r.gap_bound, 2 * r.instance.alpha, 1.0);
    return r;
}

ViewGapCheck check_view_gap(const ProofSystemSpec& ps, const std::vector<ComplexMatrix>& rhos,
                            double epsilon) {
    validate_proof_system(ps);
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw argument_error("acceptance bound must lie in [0, 1]");
    const std::size_t k = ps.rounds();
    if (rhos.size() != k - 1)
        throw argument_error("expected " + std::to_string(k - 1) + " stand-in views, got " +
                             std::to_string(rhos.size()));

    std::vector<ComplexMatrix> units;
    units.reserve(k);
    for (const Circuit& v : ps.verifiers) units.push_back(circuit_unitary(v));
    const std::size_t d = units.front().rows();
    for (const ComplexMatrix& rho : rhos)
        if (rho.rows() != d || !is_density(rho))
            throw argument_error(
                "stand-in views must be densities on the verifier and message registers");

    ComplexMatrix xik = units[k - 1] * rhos[k - 2] * units[k - 1].adjoint();
    if (accept_probability(xik, ps) < 1.0 - 1e-8)
        throw argument_error(
            "final stand-in view must be accepted with certainty after the last verifier turn");

    const std::vector<std::size_t> dims = {std::size_t{1} << ps.qv, std::size_t{1} << ps.qm};
    ComplexMatrix g0(1, 1), g1(1, 1);
    g0(0, 0) = 1.0;
    g1(0, 0) = 1.0;
    ComplexMatrix rho0(d, d);
    rho0(0, 0) = 1.0;
    for (std::size_t i = 1; i <= k - 1; ++i) {
        const ComplexMatrix& prev = (i == 1) ? rho0 : rhos[i - 2];
        ComplexMatrix xi = units[i - 1] * prev * units[i - 1].adjoint();
        g1 = tensor(g1, partial_trace(xi, dims, {0}));
        g0 = tensor(g0, partial_trace(rhos[i - 1], dims, {0}));
    }

    ViewGapCheck out;
    out.lhs = trace_norm(g1 - g0);
    const double rt = 1.0 - std::sqrt(epsilon);
    out.rhs = rt * rt / (3.0 * static_cast<double>(k - 1));
    out.holds = out.lhs >= out.rhs - 1e-8;
    return out;
}

ProofSystemFile parse_qps(const std::string& text) {
    const std::vector<parse::Token> toks = parse::tokenize(text);
    parse::Cursor cur(toks);
    ProofSystemFile f;
    cur.expect_word("qv");
    f.system.qv = cur.take_size("verifier qubit count");
    cur.expect_word("qm");
    f.system.qm = cur.take_size("message qubit count");
    cur.expect_word("qp");
    f.system.qp = cur.take_size("prover qubit count");
    cur.expect_word("messages");
    f.system.messages = cur.take_size("message count");
    cur.expect_word("outbit");
    f.system.outbit = cur.take_size("output qubit index");

    while (!cur.done()) {
        const parse::Token head = cur.take("'verifier', 'prover', or 'simulator'");
        if (head.text == "verifier" || head.text == "prover") {
            const bool is_verifier = head.text == "verifier";
            const std::size_t idx = cur.take_size("block index");
            std::vector<Circuit>& list = is_verifier ? f.system.verifiers : f.system.provers;
            if (idx != list.size() + 1)
                throw parse_error(head.text + " blocks must appear in order starting at 1",
                                  head.line, head.column);
            Circuit c;
            c.width = is_verifier ? f.system.qv + f.system.qm : f.system.qm + f.system.qp;
            for (std::size_t q = 0; q < c.width; ++q) c.outputs.push_back(q);
            c.gates = detail::parse_gate_list(cur);
            list.push_back(std::move(c));
        } else if (head.text == "simulator") {
            const std::size_t idx = cur.take_size("message index");
            if (idx < 2 || idx > f.system.messages || idx % 2 != 0)
                throw parse_error("simulator blocks are keyed by even message indices", head.line,
                                  head.column);
            if (f.simulator.circuits.count(idx))
                throw parse_error("duplicate simulator block for message " + std::to_string(idx),
                                  head.line, head.column);
            f.simulator.use_honest = false;
            Circuit c;
            if (cur.peek_is("width")) {
                cur.take("width");
                c.width = cur.take_size("simulator width");
            } else {
                c.width = f.system.qv + f.system.qm;
            }
            if (cur.peek_is("outputs")) {
                cur.take("outputs");
                while (cur.peek_is_size()) c.outputs.push_back(cur.take_size("output qubit"));
            } else {
                for (std::size_t q = 0; q < c.width; ++q) c.outputs.push_back(q);
            }
            c.gates = detail::parse_gate_list(cur);
            if (c.outputs.size() != f.system.qv + f.system.qm)
                throw parse_error("simulator block must output the verifier and message registers",
                                  head.line, head.column);
            validate_circuit(c);
            f.simulator.circuits.emplace(idx, std::move(c));
        } else {
            throw parse_error("unknown block '" + head.text + "'", head.line, head.column);
        }
    }
    validate_proof_system(f.system);
    return f;
}

std::string serialize_qps(const ProofSystemFile& f) {
    std::ostringstream os;
    os << "qv " << f.system.qv << "\n";
    os << "qm " << f.system.qm << "\n";
    os << "qp " << f.system.qp << "\n";
    os << "messages " << f.system.messages << "\n";
    os << "outbit " << f.system.outbit << "\n";
    // serialize_gates writes the terminating "end" itself.
    for (std::size_t i = 0; i < f.system.verifiers.size(); ++i) {
        os << "verifier " << i + 1 << "\n";
        detail::serialize_gates(os, f.system.verifiers[i].gates);
    }
    for (std::size_t i = 0; i < f.system.provers.size(); ++i) {
        os << "prover " << i + 1 << "\n";
        detail::serialize_gates(os, f.system.provers[i].gates);
    }
    for (const auto& [j, c] : f.simulator.circuits) {
        os << "simulator " << j;
        if (c.width != f.system.qv + f.system.qm) os << " width " << c.width;
        os << "\n";
        bool default_outputs = c.outputs.size() == c.width;
        for (std::size_t q = 0; default_outputs && q < c.outputs.size(); ++q)
            default_outputs = c.outputs[q] == q;
        if (!default_outputs) {
            os << "outputs";
            for (std::size_t q : c.outputs) os << " " << q;
            os << "\n";
        }
        detail::serialize_gates(os, c.gates);
    }
    return os.str();
}

}  // namespace qsd
