#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "qsd/circuit.hpp"
#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/linalg.hpp"
#include "qsd/polarize.hpp"
#include "qsd/protocols.hpp"
#include "qsd/random.hpp"
#include "qsd/states.hpp"

using namespace qsd;

namespace {

// Single-qubit mixed-state generator: two wires, one kept.
Circuit random_generator(Rng& rng) {
    Circuit c;
    c.width = 2;
    c.outputs = {0};
    const std::size_t n = 2 + rng.integer(4);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t q = rng.integer(2);
        if (rng.integer(3) == 0)
            c.gates.push_back(gates::cx(q, 1 - q));
        else
            c.gates.push_back(gates::u({q}, random_unitary(2, rng)));
    }
    return c;
}

QsdInstance random_instance(Rng& rng) {
    return {random_generator(rng), random_generator(rng), 0.0, 1.0};
}

// (I (x) K)|state> with the kept factor most significant.
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

// Kraus family of `count` operators on dim, sliced from a Haar isometry.
std::vector<ComplexMatrix> random_channel(std::size_t dim, std::size_t count, Rng& rng) {
    const ComplexMatrix u = random_unitary(dim * count, rng);
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = 0; k < count; ++k) {
        ComplexMatrix op(dim, dim);
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t l = 0; l < dim; ++l) op(j, l) = u(k * dim + j, l);
        kraus.push_back(op);
    }
    return kraus;
}

double first_qubit_zero_prob(const ComplexMatrix& sigma) {
    double p = 0.0;
    for (std::size_t i = 0; i < sigma.rows() / 2; ++i) p += sigma(i, i).real();
    return p;
}

}  // namespace

TEST_CASE("helstrom projectors split the identity and hit the optimum") {
    Rng rng(2001);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t dim = 2 + rng.integer(5);
        const ComplexMatrix xi0 = random_density(dim, rng);
        const ComplexMatrix xi1 = random_density(dim, rng);
        const Helstrom h = helstrom(xi0, xi1);

        CHECK((h.pi0 - h.pi0.adjoint()).max_abs() < 1e-10);
        CHECK((h.pi0 * h.pi0 - h.pi0).max_abs() < 1e-9);
        CHECK((h.pi0 + h.pi1 - ComplexMatrix::identity(dim)).max_abs() < 1e-12);
        CHECK(h.p_opt == doctest::Approx(0.5 + 0.5 * trace_norm(xi0 - xi1)).epsilon(1e-10));
    }
}

TEST_CASE("helstrom endpoints: identical and orthogonal states") {
    Rng rng(2002);
    const ComplexMatrix rho = random_density(4, rng);
    CHECK(helstrom(rho, rho).p_opt == doctest::Approx(0.5).epsilon(1e-12));

    ComplexMatrix e0(2, 2), e1(2, 2);
    e0(0, 0) = 1.0;
    e1(1, 1) = 1.0;
    CHECK(helstrom(e0, e1).p_opt == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("helstrom rejects mismatched or non-density arguments") {
    Rng rng(2003);
    CHECK_THROWS_AS(helstrom(random_density(2, rng), random_density(4, rng)), argument_error);
    ComplexMatrix not_density = ComplexMatrix::identity(2);  // trace 2
    CHECK_THROWS_AS(helstrom(not_density, random_density(2, rng)), argument_error);
}

TEST_CASE("uhlmann overlap equals the fidelity of the kept factor") {
    Rng rng(2004);
    struct Split {
        std::size_t keep, env;
    };
    for (const Split split : {Split{2, 4}, Split{4, 2}, Split{8, 1}, Split{1, 8}}) {
        for (int trial = 0; trial < 10; ++trial) {
            const StateVector phi = random_state(split.keep * split.env, rng);
            const StateVector psi = random_state(split.keep * split.env, rng);
            const UhlmannResult u = uhlmann_unitary(phi, psi, split.keep, split.env);

            const std::vector<std::size_t> dims = {split.keep, split.env};
            const ComplexMatrix rho = partial_trace(outer(phi), dims, {0});
            const ComplexMatrix sig = partial_trace(outer(psi), dims, {0});
            // Two routes (svd of the cross matrix, eig-based fidelity) agree
            // to their shared numerical floor.
            CHECK(u.overlap == doctest::Approx(fidelity(rho, sig)).epsilon(1e-7));
        }
    }
}

TEST_CASE("uhlmann unitary achieves its overlap with real nonnegative phase") {
    Rng rng(2005);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector phi = random_state(8, rng);
        const StateVector psi = random_state(8, rng);
        const UhlmannResult u = uhlmann_unitary(phi, psi, 2, 4);
        CHECK(u.unitary.is_unitary(1e-9));

        const StateVector moved = apply_env(phi, u.unitary, 2, 4);
        const cplx ip = inner(psi, moved);
        CHECK(ip.real() == doctest::Approx(u.overlap).epsilon(1e-8));
        CHECK(std::abs(ip.imag()) < 1e-8);

        // ||moved - psi||_2 = sqrt(2 - 2 Re<psi|moved>) once the phase is fixed.
        double norm2 = 0.0;
        for (std::size_t i = 0; i < moved.dim(); ++i) norm2 += std::norm(moved.amps[i] - psi.amps[i]);
        CHECK(std::sqrt(norm2) ==
              doctest::Approx(std::sqrt(2.0 * (1.0 - u.overlap))).epsilon(1e-8));
    }
}

TEST_CASE("uhlmann rejects a split that does not match the states") {
    Rng rng(2006);
    const StateVector phi = random_state(8, rng);
    const StateVector psi = random_state(8, rng);
    CHECK_THROWS_AS(uhlmann_unitary(phi, psi, 3, 2), argument_error);
    CHECK_THROWS_AS(uhlmann_unitary(phi, psi, 0, 8), argument_error);
    CHECK_THROWS_AS(uhlmann_unitary(phi, random_state(4, rng), 2, 4), argument_error);
}

TEST_CASE("honest distance test matches the discrimination optimum") {
    Rng rng(2010);
    const PolarizationParams trivial;
    for (int trial = 0; trial < 10; ++trial) {
        const QsdInstance inst = random_instance(rng);
        const ProtocolTranscript t =
            run_distance_test(inst, ProverStrategy::honest_optimal(), trivial);

        CHECK(t.protocol == "distance-test");
        CHECK(t.params.r == 1);
        CHECK(t.params.s == 1);
        CHECK(t.params.n == 1);
        REQUIRE(t.views.size() == 2);
        CHECK(t.views[0].rows() == 4);  // choice bit (x) one-qubit message
        CHECK(t.views[1].rows() == 4);

        const double d = trace_norm(prepare_mixed(inst.q0) - prepare_mixed(inst.q1));
        CHECK(t.distance == doctest::Approx(d).epsilon(1e-12));
        CHECK(t.acceptance == doctest::Approx(0.5 + 0.5 * d).epsilon(1e-10));
        CHECK(t.acceptance == doctest::Approx(t.optimal_acceptance).epsilon(1e-12));
        CHECK(t.completeness_error == doctest::Approx(1.0 - t.optimal_acceptance).epsilon(1e-12));
        CHECK(t.view_gap_bound == t.completeness_error);
        CHECK(t.fidelity_value ==
              doctest::Approx(fidelity(prepare_mixed(inst.q0), prepare_mixed(inst.q1)))
                  .epsilon(1e-9));

        // Both views carry unit trace: they are the verifier's actual states.
        CHECK(t.views[0].trace().real() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(t.views[1].trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("random provers never beat the honest distance-test optimum") {
    Rng rng(2011);
    const QsdInstance inst = random_instance(rng);
    const PolarizationParams trivial;
    const double opt =
        run_distance_test(inst, ProverStrategy::honest_optimal(), trivial).optimal_acceptance;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ProtocolTranscript t =
            run_distance_test(inst, ProverStrategy::randomized(seed), trivial);
        CHECK(t.acceptance <= opt + 1e-8);
        CHECK(t.optimal_acceptance == doctest::Approx(opt).epsilon(1e-12));
    }
}

TEST_CASE("fixed distance-test provers act on message plus private register") {
    Rng rng(2012);
    const QsdInstance inst = random_instance(rng);
    const PolarizationParams trivial;

    // The identity prover answers with the first message qubit as-is.
    const ProtocolTranscript t =
        run_distance_test(inst, ProverStrategy::fixed(ComplexMatrix::identity(4)), trivial);
    const double z0 = first_qubit_zero_prob(prepare_mixed(inst.q0));
    const double z1 = first_qubit_zero_prob(prepare_mixed(inst.q1));
    CHECK(t.acceptance == doctest::Approx(0.5 * (z0 + 1.0 - z1)).epsilon(1e-10));

    // Replace-with-|0><0| channel: the answer is 0 regardless of the bit.
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0(0, 0) = 1.0;
    k1(0, 1) = 1.0;
    const ProtocolTranscript tc =
        run_distance_test(inst, ProverStrategy::channel({k0, k1}), trivial);
    CHECK(tc.acceptance == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(
        run_distance_test(inst, ProverStrategy::fixed(ComplexMatrix::identity(2)), trivial),
        argument_error);
    ComplexMatrix skew = ComplexMatrix::identity(4);
    skew(0, 0) = 2.0;
    CHECK_THROWS_AS(run_distance_test(inst, ProverStrategy::fixed(skew), trivial),
                    argument_error);
    CHECK_THROWS_AS(run_distance_test(inst, ProverStrategy::channel({}), trivial),
                    argument_error);
    CHECK_THROWS_AS(run_distance_test(inst, ProverStrategy::channel({k0}), trivial),
                    argument_error);  // incomplete
}

TEST_CASE("distance-test simulator views sit within the advertised gap") {
    Rng rng(2013);
    const PolarizationParams trivial;
    for (int trial = 0; trial < 10; ++trial) {
        const QsdInstance inst = random_instance(rng);
        const ProtocolTranscript t =
            run_distance_test(inst, ProverStrategy::honest_optimal(), trivial);
        const std::vector<ComplexMatrix> sim = simulator_views_distance(inst, trivial);

        REQUIRE(sim.size() == t.views.size());
        CHECK(sim[0].rows() == t.views[0].rows());
        CHECK(trace_norm(sim[0] - t.views[0]) < 1e-12);
        // The answer-register gap is exactly the completeness error.
        CHECK(trace_norm(sim[1] - t.views[1]) ==
              doctest::Approx(t.view_gap_bound).epsilon(1e-9));
        CHECK(trace_norm(sim[1] - t.views[1]) <= t.view_gap_bound + 1e-9);
    }
}

TEST_CASE("honest closeness test accepts with the squared fidelity") {
    Rng rng(2014);
    const PolarizationParams trivial;
    for (int trial = 0; trial < 10; ++trial) {
        const QsdInstance inst = random_instance(rng);
        const ProtocolTranscript t =
            run_closeness_test(inst, ProverStrategy::honest_optimal(), trivial);

        CHECK(t.protocol == "closeness-test");
        REQUIRE(t.views.size() == 2);
        CHECK(t.views[0].rows() == 4);  // full two-wire purification register

        const double f = fidelity(prepare_mixed(inst.q0), prepare_mixed(inst.q1));
        CHECK(t.fidelity_value == doctest::Approx(f).epsilon(1e-7));
        CHECK(t.acceptance == doctest::Approx(f * f).epsilon(1e-7));
        CHECK(t.optimal_acceptance ==
              doctest::Approx(t.fidelity_value * t.fidelity_value).epsilon(1e-12));
        CHECK(t.completeness_error ==
              doctest::Approx(1.0 - t.optimal_acceptance).epsilon(1e-12));
        CHECK(t.view_gap_bound ==
              doctest::Approx(std::sqrt(2.0 * (1.0 - t.fidelity_value))).epsilon(1e-10));

        // Fuchs-van de Graaf sanity on the recorded pair, with slack for the
        // two independent eigensolves behind distance and fidelity.
        CHECK(t.distance >= 1.0 - t.fidelity_value - 1e-7);
        CHECK(t.distance <= std::sqrt(1.0 - f * f) + 1e-7);
    }
}

TEST_CASE("closeness provers cannot beat the squared fidelity") {
    Rng rng(2015);
    const PolarizationParams trivial;
    const QsdInstance inst = random_instance(rng);
    const double opt =
        run_closeness_test(inst, ProverStrategy::honest_optimal(), trivial).optimal_acceptance;

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ProtocolTranscript t =
            run_closeness_test(inst, ProverStrategy::randomized(seed), trivial);
        CHECK(t.acceptance <= opt + 1e-8);
    }
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t env_dim = 2;  // one traced-out wire under trivial params
        const ProtocolTranscript t = run_closeness_test(
            inst, ProverStrategy::channel(random_channel(env_dim, 1 + rng.integer(3), rng)),
            trivial);
        CHECK(t.acceptance <= opt + 1e-8);
    }
}

TEST_CASE("closeness simulator views sit within the advertised gap") {
    Rng rng(2016);
    const PolarizationParams trivial;
    for (int trial = 0; trial < 10; ++trial) {
        const QsdInstance inst = random_instance(rng);
        const ProtocolTranscript t =
            run_closeness_test(inst, ProverStrategy::honest_optimal(), trivial);
        const std::vector<ComplexMatrix> sim = simulator_views_closeness(inst, trivial);

        REQUIRE(sim.size() == t.views.size());
        CHECK(trace_norm(sim[0] - t.views[0]) < 1e-12);
        const double gap = trace_norm(sim[1] - t.views[1]);
        CHECK(gap <= t.view_gap_bound + 1e-9);
        // Pure states at overlap F sit at trace distance sqrt(1 - F^2).
        const double f = t.fidelity_value;
        CHECK(gap == doctest::Approx(std::sqrt(std::max(0.0, 1.0 - f * f))).epsilon(1e-7));
    }
}

TEST_CASE("protocols reject mismatched generators and wrong prover shapes") {
    Rng rng(2017);
    const PolarizationParams trivial;

    QsdInstance bad = random_instance(rng);
    bad.q1.outputs = {0, 1};  // output-count mismatch
    CHECK_THROWS_AS(run_distance_test(bad, ProverStrategy::honest_optimal(), trivial),
                    argument_error);
    CHECK_THROWS_AS(run_closeness_test(bad, ProverStrategy::honest_optimal(), trivial),
                    argument_error);

    // A width mismatch is absorbed: the pipeline pads both generators to a
    // common width, and the idle wire does not change the kept state.
    QsdInstance wide = random_instance(rng);
    const double f_before =
        run_closeness_test(wide, ProverStrategy::honest_optimal(), trivial).fidelity_value;
    wide.q1.width = 3;
    const ProtocolTranscript padded =
        run_closeness_test(wide, ProverStrategy::honest_optimal(), trivial);
    CHECK(padded.fidelity_value == doctest::Approx(f_before).epsilon(1e-9));
    CHECK(padded.acceptance == doctest::Approx(f_before * f_before).epsilon(1e-7));

    const QsdInstance inst = random_instance(rng);
    CHECK_THROWS_AS(
        run_closeness_test(inst, ProverStrategy::fixed(ComplexMatrix::identity(4)), trivial),
        argument_error);  // env register is one wire here
}

TEST_CASE("polarization parameters reshape both protocols before any prover acts") {
    Rng rng(2018);
    const QsdInstance inst = random_instance(rng);
    const ComplexMatrix rho0 = prepare_mixed(inst.q0);
    const ComplexMatrix rho1 = prepare_mixed(inst.q1);

    PolarizationParams params;
    params.r = 2;
    params.s = 2;
    params.n = 1;
    const auto [p0, p1] = polarize_states(rho0, rho1, params);
    const double d = trace_norm(p0 - p1);

    const ProtocolTranscript t =
        run_distance_test(inst, ProverStrategy::honest_optimal(), params);
    CHECK(t.views[0].rows() == 2 * p0.rows());
    CHECK(t.distance == doctest::Approx(d).epsilon(1e-9));
    CHECK(t.acceptance == doctest::Approx(0.5 + 0.5 * d).epsilon(1e-9));

    PolarizationParams xr;
    xr.r = 2;
    const ProtocolTranscript tc = run_closeness_test(inst, ProverStrategy::honest_optimal(), xr);
    const auto [x0, x1] = polarize_states(rho0, rho1, xr);
    const double f = fidelity(x0, x1);
    CHECK(tc.fidelity_value == doctest::Approx(f).epsilon(1e-8));
    CHECK(tc.acceptance == doctest::Approx(f * f).epsilon(1e-8));
}

TEST_CASE("view construction refuses to exceed the matrix dimension cap") {
    Rng rng(2019);
    const QsdInstance inst = random_instance(rng);
    const std::size_t saved = config::max_matrix_dim();
    config::set_max_matrix_dim(2);
    const PolarizationParams trivial;
    // Distance views need 2 * dim; closeness views need the full 2^width.
    CHECK_THROWS_AS(run_distance_test(inst, ProverStrategy::honest_optimal(), trivial),
                    capacity_error);
    CHECK_THROWS_AS(run_closeness_test(inst, ProverStrategy::honest_optimal(), trivial),
                    capacity_error);
    config::set_max_matrix_dim(saved);
}
