#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

using std::filesystem::path;

namespace {

struct RunResult {
    int code = -1;
    std::string raw;
    std::map<std::string, std::string> kv;

    double value(const std::string& key) const {
        REQUIRE(kv.count(key) == 1);
        return std::stod(kv.at(key));
    }
    std::string text(const std::string& key) const {
        REQUIRE(kv.count(key) == 1);
        return kv.at(key);
    }
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + "\"" + QSD_CLI_PATH + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);

    RunResult r;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) r.raw += buf;
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    std::size_t start = 0;
    while (start < r.raw.size()) {
        std::size_t nl = r.raw.find('\n', start);
        if (nl == std::string::npos) nl = r.raw.size();
        const std::string line = r.raw.substr(start, nl - start);
        const std::size_t eq = line.find('=');
        if (eq != std::string::npos && eq > 0) r.kv[line.substr(0, eq)] = line.substr(eq + 1);
        start = nl + 1;
    }
    return r;
}

// Scratch directory with the small generator files every case leans on.
struct Scratch {
    path dir;

    Scratch() {
        dir = std::filesystem::temp_directory_path() /
              ("qsd_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
        write("id.qc", "circuit 1\nend\n");
        write("x.qc", "circuit 1\nx 0\nend\n");
        write("h.qc", "circuit 1\nh 0\nend\n");
        write("ghz3.qc", "circuit 3\nh 0\ncx 0 1\ncx 1 2\nend\n");
        write("diag.mat", "matrix 2 2\n1 0\n0 -2\n");
        write("four.qps",
              "qv 1\nqm 1\nqp 1\nmessages 4\noutbit 0\n"
              "verifier 1\nend\nverifier 2\nend\nverifier 3\nend\n"
              "prover 1\nend\nprover 2\nend\n");
    }
    ~Scratch() { std::filesystem::remove_all(dir); }

    void write(const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

Scratch& scratch() {
    static Scratch s;
    return s;
}

std::string fixture(const std::string& name) {
    return std::string(QSD_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("distance command reports identical, orthogonal, and overlapping pairs") {
    Scratch& s = scratch();

    RunResult same = run("dist " + s.file("id.qc") + " " + s.file("id.qc") + " --machine");
    CHECK(same.code == 0);
    CHECK(same.text("command") == "dist");
    CHECK(same.value("distance") == 0.0);
    CHECK(same.value("fidelity") == 1.0);
    CHECK(same.text("check_fvg_bracket") == "PASS");

    RunResult ortho = run("dist " + s.file("id.qc") + " " + s.file("x.qc") + " --machine");
    CHECK(ortho.code == 0);
    CHECK(ortho.value("distance") == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(ortho.value("fidelity") == doctest::Approx(0.0).epsilon(1e-11));

    RunResult half = run("dist " + s.file("id.qc") + " " + s.file("h.qc") + " --machine");
    CHECK(half.code == 0);
    CHECK(half.value("distance") == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(half.value("fidelity") == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(half.text("check_fvg_bracket") == "PASS");
}

TEST_CASE("polarize derives the worked parameters") {
    Scratch& s = scratch();
    RunResult r = run("polarize " + s.file("id.qc") + " " + s.file("h.qc") +
                      " --n 2 --alpha 0.1 --beta 0.9 --machine");
    CHECK(r.code == 0);
    CHECK(r.text("r") == "2");
    CHECK(r.text("s") == "50");
    CHECK(r.text("n") == "2");
    CHECK(r.text("s_capped") == "false");
    CHECK(r.value("alpha") == 0.1);
    CHECK(r.value("beta") == 0.9);
}

TEST_CASE("polarize emits reparseable circuits under explicit overrides") {
    Scratch& s = scratch();
    const std::string out = (s.dir / "pol_out").string();
    RunResult r = run("polarize " + s.file("id.qc") + " " + s.file("h.qc") +
                      " --n 1 --r 1 --s 1 --out " + out + " --machine");
    CHECK(r.code == 0);
    CHECK(r.text("width") == "1");
    REQUIRE(std::filesystem::exists(r.text("out0")));
    REQUIRE(std::filesystem::exists(r.text("out1")));

    // Trivial parameters leave the pair's distance untouched.
    RunResult d = run("dist " + r.text("out0") + " " + r.text("out1") + " --machine");
    CHECK(d.code == 0);
    CHECK(d.value("distance") == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("protocol runs report acceptance against the optimum") {
    Scratch& s = scratch();
    const std::string pair = s.file("id.qc") + " " + s.file("h.qc");

    RunResult dist = run("protocol distance " + pair + " --machine");
    CHECK(dist.code == 0);
    CHECK(dist.text("protocol") == "distance-test");
    const double want = 0.5 + 0.5 * std::sqrt(0.5);
    CHECK(dist.value("acceptance") == doctest::Approx(want).epsilon(1e-9));
    CHECK(dist.value("optimal_acceptance") == doctest::Approx(want).epsilon(1e-9));
    CHECK(dist.text("check_acceptance_bound") == "PASS");

    RunResult close = run("protocol closeness " + pair + " --machine");
    CHECK(close.code == 0);
    CHECK(close.text("protocol") == "closeness-test");
    CHECK(close.value("acceptance") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(close.value("fidelity") == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));

    RunResult rand = run("protocol distance " + pair + " --prover random:7 --machine");
    CHECK(rand.code == 0);
    CHECK(rand.value("acceptance") <= rand.value("optimal_acceptance") + 1e-8);
    CHECK(rand.text("check_acceptance_bound") == "PASS");
}

TEST_CASE("reduce wires the fixtures through to decisions") {
    RunResult bell = run("reduce " + fixture("bell_handshake_accept.qps") + " --check --machine");
    CHECK(bell.code == 0);
    CHECK(bell.value("epsilon") == 1.0);
    CHECK(bell.value("gap_bound") == 0.0);
    CHECK(bell.text("outcome") == "no");
    CHECK(bell.text("check_promise") == "PASS");

    RunResult coin = run("reduce " + fixture("coin_guess_reject.qps") + " --check --machine");
    CHECK(coin.code == 0);
    CHECK(coin.value("epsilon") == 0.5);
    CHECK(coin.value("gap_bound") ==
          doctest::Approx(std::pow(1.0 - std::sqrt(0.5), 2) / 3.0).epsilon(1e-10));
    CHECK(coin.value("distance") ==
          doctest::Approx((1.0 + std::sqrt(5.0)) / 4.0).epsilon(1e-9));
    CHECK(coin.text("outcome") == "yes");

    RunResult ov = run("reduce " + fixture("overlap_reject.qps") + " --check --machine");
    CHECK(ov.code == 0);
    CHECK(ov.value("epsilon") == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(ov.value("gap_bound") == doctest::Approx(0.27).epsilon(1e-10));
    CHECK(ov.value("distance") == doctest::Approx(std::sqrt(0.99)).epsilon(1e-9));
    CHECK(ov.text("outcome") == "yes");

    RunResult forced =
        run("reduce " + fixture("coin_guess_reject.qps") + " --epsilon 0.2 --machine");
    CHECK(forced.code == 0);
    CHECK(forced.value("epsilon") == 0.2);
    CHECK(forced.value("gap_bound") ==
          doctest::Approx(std::pow(1.0 - std::sqrt(0.2), 2) / 3.0).epsilon(1e-10));
}

TEST_CASE("reduce round-trips its emitted generator pair") {
    Scratch& s = scratch();
    const std::string out = (s.dir / "red_out").string();
    RunResult red =
        run("reduce " + fixture("overlap_reject.qps") + " --out " + out + " --check --machine");
    CHECK(red.code == 0);

    RunResult d = run("dist " + red.text("out0") + " " + red.text("out1") + " --machine");
    CHECK(d.code == 0);
    CHECK(d.value("distance") == doctest::Approx(red.value("distance")).epsilon(1e-9));
}

TEST_CASE("trace-norm command agrees across methods") {
    Scratch& s = scratch();
    RunResult cp = run("tna " + s.file("diag.mat") + " -k 25 --machine");
    CHECK(cp.code == 0);
    CHECK(cp.text("method") == "charpoly");
    CHECK(cp.text("k") == "25");
    CHECK(cp.value("value") == doctest::Approx(1.5).epsilon(1e-7));

    RunResult eig = run("tna " + s.file("diag.mat") + " --method eig --machine");
    CHECK(eig.code == 0);
    CHECK(eig.value("value") == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("failures exit with the error code and a message") {
    Scratch& s = scratch();

    RunResult missing = run("dist /no/such/file.qc " + s.file("id.qc") + " --machine");
    CHECK(missing.code == 2);
    CHECK(missing.raw.find("error:") != std::string::npos);

    RunResult mismatch = run("dist " + s.file("ghz3.qc") + " " + s.file("id.qc") + " --machine");
    CHECK(mismatch.code == 2);

    // No closed-form acceptance optimum: the default epsilon cannot be derived.
    RunResult four = run("reduce " + s.file("four.qps") + " --machine");
    CHECK(four.code == 2);
    CHECK(four.raw.find("--epsilon") != std::string::npos);

    RunResult unknown = run("frobnicate");
    CHECK(unknown.code == 2);
}

TEST_CASE("the state-qubit cap is honored from the environment") {
    Scratch& s = scratch();
    const std::string pair = s.file("ghz3.qc") + " " + s.file("ghz3.qc");

    RunResult ok = run("dist " + pair + " --machine");
    CHECK(ok.code == 0);
    CHECK(ok.value("distance") == 0.0);

    RunResult capped = run("dist " + pair + " --machine", "QSD_MAX_QUBITS=2 ");
    CHECK(capped.code == 2);

    RunResult bad = run("dist " + pair + " --machine", "QSD_MAX_QUBITS=abc ");
    CHECK(bad.code == 2);
    CHECK(bad.raw.find("QSD_MAX_QUBITS") != std::string::npos);
}
