#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qsd/circuit.hpp"
#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/linalg.hpp"
#include "qsd/matrix.hpp"
#include "qsd/polarize.hpp"
#include "qsd/protocols.hpp"
#include "qsd/reduction.hpp"
#include "qsd/states.hpp"
#include "qsd/tna.hpp"

namespace {

using namespace qsd;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw argument_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw argument_error("cannot write " + path);
    out << text;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ull) {
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t digest_matrix(const ComplexMatrix& m) {
    std::uint64_t h = fnv1a({});
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) {
        const cplx v = m.data()[i];
        const double parts[2] = {v.real(), v.imag()};
        h = fnv1a({reinterpret_cast<const char*>(parts), sizeof parts}, h);
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Line-oriented report: "key=value" under --machine, aligned "key  value"
// otherwise. Bound checks print PASS/FAIL with their tolerance and flip the
// process exit code to 1 on any FAIL.
struct Report {
    bool machine = false;
    bool failed = false;

    void kv(const std::string& key, const std::string& val) {
        if (machine) {
            std::printf("%s=%s\n", key.c_str(), val.c_str());
        } else {
            std::string label = key;
            for (char& c : label)
                if (c == '_') c = ' ';
            std::printf("%-22s %s\n", label.c_str(), val.c_str());
        }
    }

    void kv(const std::string& key, double v) { kv(key, num(v)); }

    void check(const std::string& name, bool pass, double tol) {
        if (!pass) failed = true;
        if (machine) {
            kv("check_" + name, pass ? "PASS" : "FAIL");
            kv("check_" + name + "_tol", num(tol));
        } else {
            kv("check " + name, std::string(pass ? "PASS" : "FAIL") + "  (tol " + num(tol) + ")");
        }
    }

    int exit_code() const { return failed ? 1 : 0; }
};

struct DistArgs {
    std::string q0, q1;
    bool machine = false;
};

int cmd_dist(const DistArgs& a) {
    const std::string t0 = slurp(a.q0), t1 = slurp(a.q1);
    const Circuit q0 = parse_circuit(t0), q1 = parse_circuit(t1);
    const ComplexMatrix xi0 = prepare_mixed(q0), xi1 = prepare_mixed(q1);
    if (xi0.rows() != xi1.rows())
        throw argument_error("dist: generators produce different output dimensions");

    const double d = trace_norm(xi0 - xi1);
    const double f = fidelity(xi0, xi1);
    const double lower = 1.0 - f;
    const double upper = std::sqrt(std::max(0.0, 1.0 - f * f));

    Report rep{a.machine};
    rep.kv("command", "dist");
    rep.kv("inputs_digest", hex64(fnv1a(t1, fnv1a(t0))));
    rep.kv("dim", num(static_cast<double>(xi0.rows())));
    rep.kv("distance", d);
    rep.kv("fidelity", f);
    rep.kv("fvg_lower", lower);
    rep.kv("fvg_upper", upper);
    rep.check("fvg_bracket", lower <= d + 1e-9 && d <= upper + 1e-9, 1e-9);
    return rep.exit_code();
}

struct PolarizeArgs {
    std::string q0, q1, out;
    std::size_t n = 1;
    double alpha = 0.0, beta = 1.0;
    std::optional<std::size_t> r, s;
    bool machine = false;
};

int cmd_polarize(const PolarizeArgs& a) {
    const std::string t0 = slurp(a.q0), t1 = slurp(a.q1);
    const Circuit q0 = parse_circuit(t0), q1 = parse_circuit(t1);

    std::optional<std::pair<std::size_t, std::size_t>> override_rs;
    if (a.r) override_rs = {{*a.r, *a.s}};
    PolarizationParams params;
    if (override_rs) {
        params.n = a.n;
        params.r = override_rs->first;
        params.s = override_rs->second;
        params.alpha = a.alpha;
        params.beta = a.beta;
    } else {
        params = derive_polarization_params(a.alpha, a.beta, a.n);
    }

    Report rep{a.machine};
    rep.kv("command", "polarize");
    rep.kv("inputs_digest", hex64(fnv1a(t1, fnv1a(t0))));
    rep.kv("n", num(static_cast<double>(params.n)));
    rep.kv("alpha", params.alpha);
    rep.kv("beta", params.beta);
    rep.kv("r", num(static_cast<double>(params.r)));
    rep.kv("s", num(static_cast<double>(params.s)));
    rep.kv("s_capped", params.s_capped ? "true" : "false");

    if (!a.out.empty()) {
        try {
            const PolarizeResult res = polarize(q0, q1, params.n, params.alpha, params.beta,
                                                {{params.r, params.s}});
            std::filesystem::create_directories(a.out);
            const std::string header = polarization_header(res.params);
            const std::string p0 = (std::filesystem::path(a.out) / "r0.qc").string();
            const std::string p1 = (std::filesystem::path(a.out) / "r1.qc").string();
            spit(p0, header + serialize_circuit(res.r0));
            spit(p1, header + serialize_circuit(res.r1));
            rep.kv("width", num(static_cast<double>(res.r0.width)));
            rep.kv("out0", p0);
            rep.kv("out1", p1);
        } catch (const capacity_error&) {
            rep.kv("notice", "materialized circuits exceed the width cap; parameters only");
        }
    }
    return rep.exit_code();
}

struct ProtocolArgs {
    std::string which, q0, q1, prover = "honest";
    std::size_t r = 1, s = 1, n = 1;
    double alpha = 0.0, beta = 1.0;
    bool machine = false;
};

ProverStrategy parse_prover(const std::string& s) {
    if (s == "honest") return ProverStrategy::honest_optimal();
    if (s.rfind("random:", 0) == 0) {
        std::size_t used = 0;
        const std::uint64_t seed = std::stoull(s.substr(7), &used);
        if (used != s.size() - 7) throw argument_error("protocol: bad random seed in " + s);
        return ProverStrategy::randomized(seed);
    }
    if (s.rfind("file:", 0) == 0) {
        std::vector<ComplexMatrix> blocks = parse_matrix_blocks(slurp(s.substr(5)));
        if (blocks.empty()) throw argument_error("protocol: prover file holds no matrices");
        return ProverStrategy::channel(std::move(blocks));
    }
    throw argument_error("protocol: prover must be honest, random:<seed>, or file:<path>");
}

int cmd_protocol(const ProtocolArgs& a) {
    const std::string t0 = slurp(a.q0), t1 = slurp(a.q1);
    QsdInstance inst;
    inst.q0 = parse_circuit(t0);
    inst.q1 = parse_circuit(t1);
    inst.alpha = a.alpha;
    inst.beta = a.beta;

    PolarizationParams params;
    params.r = a.r;
    params.s = a.s;
    params.n = a.n;
    params.alpha = a.alpha;
    params.beta = a.beta;

    const ProverStrategy prover = parse_prover(a.prover);
    const ProtocolTranscript t = a.which == "distance"
                                     ? run_distance_test(inst, prover, params)
                                     : run_closeness_test(inst, prover, params);

    Report rep{a.machine};
    rep.kv("command", "protocol");
    rep.kv("protocol", t.protocol);
    rep.kv("prover", a.prover);
    rep.kv("inputs_digest", hex64(fnv1a(t1, fnv1a(t0))));
    rep.kv("r", num(static_cast<double>(params.r)));
    rep.kv("s", num(static_cast<double>(params.s)));
    rep.kv("n", num(static_cast<double>(params.n)));
    rep.kv("acceptance", t.acceptance);
    rep.kv("optimal_acceptance", t.optimal_acceptance);
    rep.kv("completeness_error", t.completeness_error);
    rep.kv("distance", t.distance);
    rep.kv("fidelity", t.fidelity_value);
    rep.kv("view_gap_bound", t.view_gap_bound);
    for (std::size_t i = 0; i < t.views.size(); ++i)
        rep.kv("view" + std::to_string(i + 1) + "_digest", hex64(digest_matrix(t.views[i])));
    rep.check("acceptance_bound", t.acceptance <= t.optimal_acceptance + 1e-8, 1e-8);
    return rep.exit_code();
}

struct ReduceArgs {
    std::string qps, out;
    std::optional<double> epsilon;
    bool check = false;
    bool machine = false;
};

int cmd_reduce(const ReduceArgs& a) {
    const std::string text = slurp(a.qps);
    const ProofSystemFile file = parse_qps(text);

    double eps;
    if (a.epsilon) {
        eps = *a.epsilon;
    } else {
        // The bound feeding the gap formula is the best acceptance any prover
        // can reach, so the exact two-message optimum is the right default.
        try {
            eps = std::min(1.0, std::max(0.0, max_accept_exact(file.system)));
        } catch (const unsupported_error&) {
            throw argument_error(
                "reduce: no closed form for this system's acceptance; pass --epsilon");
        }
    }

    const QsdReduction red = reduce_to_qsd(file.system, file.simulator, eps);

    Report rep{a.machine};
    rep.kv("command", "reduce");
    rep.kv("inputs_digest", hex64(fnv1a(text)));
    rep.kv("epsilon", red.epsilon);
    rep.kv("gap_bound", red.gap_bound);
    rep.kv("alpha", red.instance.alpha);
    rep.kv("beta", red.instance.beta);
    rep.kv("q0_width", num(static_cast<double>(red.instance.q0.width)));
    rep.kv("q1_width", num(static_cast<double>(red.instance.q1.width)));

    if (!a.out.empty()) {
        std::filesystem::create_directories(a.out);
        const std::string p0 = (std::filesystem::path(a.out) / "q0.qc").string();
        const std::string p1 = (std::filesystem::path(a.out) / "q1.qc").string();
        spit(p0, serialize_circuit(red.instance.q0));
        spit(p1, serialize_circuit(red.instance.q1));
        rep.kv("out0", p0);
        rep.kv("out1", p1);
    }

    if (a.check) {
        const QsdVerdict v = decide_qsd(red.instance);
        rep.kv("distance", v.distance);
        rep.kv("outcome", v.outcome == QsdOutcome::yes  ? "yes"
                          : v.outcome == QsdOutcome::no ? "no"
                                                        : "promise_violated");
        rep.check("promise", v.outcome != QsdOutcome::promise_violated, 1e-9);
    }
    return rep.exit_code();
}

struct TnaArgs {
    std::string matrix;
    unsigned k = 10;
    std::string method = "charpoly";
    bool machine = false;
};

int cmd_tna(const TnaArgs& a) {
    const std::string text = slurp(a.matrix);
    const ComplexMatrix x = parse_matrix_file(text);
    const double value = a.method == "eig" ? trace_norm(x) : tna(x, a.k);

    Report rep{a.machine};
    rep.kv("command", "tna");
    rep.kv("inputs_digest", hex64(fnv1a(text)));
    rep.kv("method", a.method);
    rep.kv("k", num(static_cast<double>(a.k)));
    rep.kv("value", value);
    return rep.exit_code();
}

void apply_env_caps() {
    if (const char* env = std::getenv("QSD_MAX_QUBITS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 30)
            throw argument_error("QSD_MAX_QUBITS must be an integer in [1, 30]");
        config::set_max_state_qubits(static_cast<int>(v));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-state generators: distances, polarization, protocols, reductions"};
    app.require_subcommand(1);

    DistArgs dist_args;
    CLI::App* dist = app.add_subcommand("dist", "trace distance and fidelity of two generators");
    dist->add_option("q0", dist_args.q0, "first circuit file")->required();
    dist->add_option("q1", dist_args.q1, "second circuit file")->required();
    dist->add_flag("--machine", dist_args.machine, "key=value output");

    PolarizeArgs pol_args;
    CLI::App* pol = app.add_subcommand("polarize", "polarization pipeline parameters and circuits");
    pol->add_option("q0", pol_args.q0, "first circuit file")->required();
    pol->add_option("q1", pol_args.q1, "second circuit file")->required();
    pol->add_option("--n", pol_args.n, "security parameter")->required();
    pol->add_option("--alpha", pol_args.alpha, "closeness threshold (default 0)");
    pol->add_option("--beta", pol_args.beta, "farness threshold (default 1)");
    CLI::Option* opt_r = pol->add_option("--r", pol_args.r, "override first-stage exponent");
    CLI::Option* opt_s = pol->add_option("--s", pol_args.s, "override amplification copies");
    opt_r->needs(opt_s);
    opt_s->needs(opt_r);
    pol->add_option("--out", pol_args.out, "directory for r0.qc / r1.qc");
    pol->add_flag("--machine", pol_args.machine, "key=value output");

    ProtocolArgs prot_args;
    CLI::App* prot = app.add_subcommand("protocol", "run a two-message protocol simulation");
    prot->add_option("which", prot_args.which, "distance or closeness")
        ->required()
        ->check(CLI::IsMember({"distance", "closeness"}));
    prot->add_option("q0", prot_args.q0, "first circuit file")->required();
    prot->add_option("q1", prot_args.q1, "second circuit file")->required();
    prot->add_option("--prover", prot_args.prover, "honest | random:<seed> | file:<kraus>");
    prot->add_option("--r", prot_args.r, "first-stage exponent (default 1)");
    prot->add_option("--s", prot_args.s, "amplification copies (default 1)");
    prot->add_option("--n", prot_args.n, "final xor blocks (default 1)");
    prot->add_option("--alpha", prot_args.alpha, "instance closeness threshold");
    prot->add_option("--beta", prot_args.beta, "instance farness threshold");
    prot->add_flag("--machine", prot_args.machine, "key=value output");

    ReduceArgs red_args;
    CLI::App* red = app.add_subcommand("reduce", "reduce a proof system to a generator pair");
    red->add_option("system", red_args.qps, "proof system file (.qps)")->required();
    red->add_option("--out", red_args.out, "directory for q0.qc / q1.qc");
    red->add_option("--epsilon", red_args.epsilon, "acceptance bound override");
    red->add_flag("--check", red_args.check, "decide the emitted instance directly");
    red->add_flag("--machine", red_args.machine, "key=value output");

    TnaArgs tna_args;
    CLI::App* tna_cmd = app.add_subcommand("tna", "trace-norm approximation of a matrix file");
    tna_cmd->add_option("matrix", tna_args.matrix, "matrix file")->required();
    tna_cmd->add_option("-k", tna_args.k, "agreement bits (default 10)");
    tna_cmd->add_option("--method", tna_args.method, "charpoly | eig")
        ->check(CLI::IsMember({"charpoly", "eig"}));
    tna_cmd->add_flag("--machine", tna_args.machine, "key=value output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        apply_env_caps();
        if (app.got_subcommand(dist)) return cmd_dist(dist_args);
        if (app.got_subcommand(pol)) return cmd_polarize(pol_args);
        if (app.got_subcommand(prot)) return cmd_protocol(prot_args);
        if (app.got_subcommand(red)) return cmd_reduce(red_args);
        if (app.got_subcommand(tna_cmd)) return cmd_tna(tna_args);
    } catch (const qsd::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
