#include "qsd/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "circuit_parse.hpp"
#include "parse_util.hpp"
#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/kernels.hpp"

namespace qsd {

namespace gates {

namespace {

Gate one(const char* name, std::size_t q, std::initializer_list<cplx> entries) {
    ComplexMatrix m(2, 2);
    std::copy(entries.begin(), entries.end(), m.data());
    return Gate{name, {q}, std::move(m)};
}

Gate two(const char* name, std::size_t a, std::size_t b, std::initializer_list<cplx> entries) {
    ComplexMatrix m(4, 4);
    std::copy(entries.begin(), entries.end(), m.data());
    return Gate{name, {a, b}, std::move(m)};
}

const double kInvSqrt2 = std::sqrt(0.5);

}  // namespace

Gate h(std::size_t q) {
    return one("h", q, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
}
Gate x(std::size_t q) { return one("x", q, {0, 1, 1, 0}); }
Gate y(std::size_t q) { return one("y", q, {0, cplx(0, -1), cplx(0, 1), 0}); }
Gate z(std::size_t q) { return one("z", q, {1, 0, 0, -1}); }
Gate s(std::size_t q) { return one("s", q, {1, 0, 0, cplx(0, 1)}); }
Gate sdg(std::size_t q) { return one("sdg", q, {1, 0, 0, cplx(0, -1)}); }
Gate t(std::size_t q) {
    return one("t", q, {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)});
}
Gate tdg(std::size_t q) {
    return one("tdg", q, {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)});
}
Gate cx(std::size_t control, std::size_t target) {
    return two("cx", control, target,
               {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
}
Gate cz(std::size_t a, std::size_t b) {
    return two("cz", a, b, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1});
}
Gate swap(std::size_t a, std::size_t b) {
    return two("swap", a, b, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
}
Gate u(std::vector<std::size_t> targets, ComplexMatrix m) {
    return Gate{"u", std::move(targets), std::move(m)};
}

}  // namespace gates

Gate controlled(const Gate& g, std::size_t control) {
    const std::size_t d = g.matrix.rows();
    ComplexMatrix m(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = 0; j < d; ++j) m(d + i, d + j) = g.matrix(i, j);
    }
    std::vector<std::size_t> targets;
    targets.reserve(g.targets.size() + 1);
    targets.push_back(control);
    targets.insert(targets.end(), g.targets.begin(), g.targets.end());
    return Gate{"u", std::move(targets), std::move(m)};
}

Gate gate_adjoint(const Gate& g) {
    std::string name = g.mnemonic;
    if (name == "s")
        name = "sdg";
    else if (name == "sdg")
        name = "s";
    else if (name == "t")
        name = "tdg";
    else if (name == "tdg")
        name = "t";
    return Gate{std::move(name), g.targets, g.matrix.adjoint()};
}

namespace {

void validate_gate(const Gate& g, std::size_t width) {
    if (g.targets.empty()) throw argument_error("gate '" + g.mnemonic + "' has no targets");
    const std::size_t k = g.targets.size();
    if (k >= 8 * sizeof(std::size_t))
        throw capacity_error("gate '" + g.mnemonic + "' has too many targets");
    if (!g.matrix.is_square() || g.matrix.rows() != (std::size_t{1} << k))
        throw argument_error("gate '" + g.mnemonic + "' matrix dimension does not match " +
                             std::to_string(k) + " targets");
    for (std::size_t t : g.targets)
        if (t >= width)
            throw argument_error("gate '" + g.mnemonic + "' target " + std::to_string(t) +
                                 " is out of range for width " + std::to_string(width));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (g.targets[i] == g.targets[j])
                throw argument_error("gate '" + g.mnemonic + "' repeats target " +
                                     std::to_string(g.targets[i]));
    if (!g.matrix.is_unitary(1e-9))
        throw argument_error("gate '" + g.mnemonic + "' matrix is not unitary");
}

void validate_wires(const std::vector<std::size_t>& wires, std::size_t width, const char* what) {
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (wires[i] >= width)
            throw argument_error(std::string(what) + " index " + std::to_string(wires[i]) +
                                 " is out of range for width " + std::to_string(width));
        for (std::size_t j = i + 1; j < wires.size(); ++j)
            if (wires[i] == wires[j])
                throw argument_error(std::string(what) + " repeats qubit " +
                                     std::to_string(wires[i]));
    }
}

}  // namespace

void validate_circuit(const Circuit& c) {
    if (c.width == 0) throw argument_error("circuit width must be positive");
    validate_wires(c.outputs, c.width, "output");
    for (const Gate& g : c.gates) validate_gate(g, c.width);
}

StateVector zero_state(std::size_t width) {
    if (width == 0) throw argument_error("zero_state: width must be positive");
    if (width > static_cast<std::size_t>(config::max_state_qubits()))
        throw capacity_error("zero_state: " + std::to_string(width) +
                             " qubits exceeds the state size cap " +
                             std::to_string(config::max_state_qubits()));
    StateVector psi(std::size_t{1} << width);
    psi.amps[0] = 1.0;
    return psi;
}

StateVector apply_gate(StateVector psi, const Gate& g, std::size_t width) {
    validate_gate(g, width);
    const std::size_t dim = std::size_t{1} << width;
    if (psi.dim() != dim)
        throw argument_error("apply_gate: state dimension does not match circuit width");
    const std::size_t k = g.targets.size();

    if (k == 1) {
        const std::size_t stride = std::size_t{1} << (width - 1 - g.targets[0]);
        kernels::active().apply_1q(psi.amps.data(), dim, stride, g.matrix.data());
        return psi;
    }

    // General gather/scatter path. Bit positions of the targets in the global
    // index; targets[0] is the most significant bit of the local gate index.
    const std::size_t gdim = std::size_t{1} << k;
    std::vector<std::size_t> offset(gdim, 0);
    for (std::size_t l = 0; l < gdim; ++l)
        for (std::size_t a = 0; a < k; ++a)
            if ((l >> (k - 1 - a)) & 1) offset[l] |= std::size_t{1} << (width - 1 - g.targets[a]);

    std::vector<std::size_t> pos;
    pos.reserve(k);
    for (std::size_t t : g.targets) pos.push_back(width - 1 - t);
    std::sort(pos.begin(), pos.end());

    std::vector<cplx> in(gdim), out(gdim);
    for (std::size_t cidx = 0; cidx < (dim >> k); ++cidx) {
        std::size_t base = cidx;
        for (std::size_t p : pos) {
            const std::size_t low = (std::size_t{1} << p) - 1;
            base = ((base & ~low) << 1) | (base & low);
        }
        for (std::size_t l = 0; l < gdim; ++l) in[l] = psi.amps[base | offset[l]];
        for (std::size_t r = 0; r < gdim; ++r) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < gdim; ++l) acc += g.matrix(r, l) * in[l];
            out[r] = acc;
        }
        for (std::size_t l = 0; l < gdim; ++l) psi.amps[base | offset[l]] = out[l];
    }
    return psi;
}

StateVector apply_circuit(StateVector psi, const Circuit& c) {
    if (c.width > static_cast<std::size_t>(config::max_state_qubits()))
        throw capacity_error("apply_circuit: " + std::to_string(c.width) +
                             " qubits exceeds the state size cap " +
                             std::to_string(config::max_state_qubits()));
    for (const Gate& g : c.gates) psi = apply_gate(std::move(psi), g, c.width);
    return psi;
}

ComplexMatrix circuit_unitary(const Circuit& c) {
    validate_circuit(c);
    const std::size_t dim = std::size_t{1} << c.width;
    if (dim > config::max_matrix_dim())
        throw capacity_error("circuit_unitary: 2^" + std::to_string(c.width) +
                             " exceeds the matrix dimension cap");
    ComplexMatrix u(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        StateVector col(dim);
        col.amps[j] = 1.0;
        for (const Gate& g : c.gates) col = apply_gate(std::move(col), g, c.width);
        for (std::size_t i = 0; i < dim; ++i) u(i, j) = col.amps[i];
    }
    return u;
}

Circuit circuit_adjoint(const Circuit& c) {
    Circuit out{c.width, c.outputs, {}};
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
        out.gates.push_back(gate_adjoint(*it));
    return out;
}

namespace {

Gate remap_gate(const Gate& g, const std::vector<std::size_t>& wire_map) {
    Gate out{g.mnemonic, {}, g.matrix};
    out.targets.reserve(g.targets.size());
    for (std::size_t t : g.targets) {
        if (t >= wire_map.size())
            throw argument_error("wire map does not cover qubit " + std::to_string(t));
        out.targets.push_back(wire_map[t]);
    }
    return out;
}

}  // namespace

void append(Circuit& dst, const Circuit& src, const std::vector<std::size_t>& wire_map) {
    if (wire_map.size() != src.width)
        throw argument_error("append: wire map size does not match source width");
    validate_wires(wire_map, dst.width, "wire map");
    for (const Gate& g : src.gates) dst.gates.push_back(remap_gate(g, wire_map));
}

void append_controlled(Circuit& dst, const Circuit& src, std::size_t control,
                       const std::vector<std::size_t>& wire_map) {
    if (wire_map.size() != src.width)
        throw argument_error("append_controlled: wire map size does not match source width");
    validate_wires(wire_map, dst.width, "wire map");
    if (control >= dst.width) throw argument_error("append_controlled: control out of range");
    for (std::size_t w : wire_map)
        if (w == control)
            throw argument_error("append_controlled: control collides with the wire map");
    for (const Gate& g : src.gates)
        dst.gates.push_back(controlled(remap_gate(g, wire_map), control));
}

Circuit compose(const Circuit& a, const Circuit& b, const std::vector<int>& wiring) {
    if (wiring.size() != b.width)
        throw argument_error("compose: wiring size does not match second circuit width");
    Circuit out{a.width, {}, a.gates};
    std::vector<std::size_t> wire_map(b.width);
    for (std::size_t j = 0; j < b.width; ++j) {
        if (wiring[j] < 0) {
            wire_map[j] = out.width++;
        } else {
            if (static_cast<std::size_t>(wiring[j]) >= a.width)
                throw argument_error("compose: wiring refers past the first circuit");
            wire_map[j] = static_cast<std::size_t>(wiring[j]);
        }
    }
    validate_wires(wire_map, out.width, "wiring");
    for (const Gate& g : b.gates) out.gates.push_back(remap_gate(g, wire_map));
    out.outputs.reserve(b.outputs.size());
    for (std::size_t q : b.outputs) out.outputs.push_back(wire_map[q]);
    return out;
}

Circuit parallel(const Circuit& a, const Circuit& b) {
    Circuit out{a.width + b.width, a.outputs, a.gates};
    std::vector<std::size_t> shift(b.width);
    for (std::size_t j = 0; j < b.width; ++j) shift[j] = a.width + j;
    for (const Gate& g : b.gates) out.gates.push_back(remap_gate(g, shift));
    for (std::size_t q : b.outputs) out.outputs.push_back(a.width + q);
    return out;
}

Circuit with_outputs(Circuit c, std::vector<std::size_t> outputs) {
    validate_wires(outputs, c.width, "output");
    c.outputs = std::move(outputs);
    return c;
}

// --- text format -------------------------------------------------------------

namespace {

// Fixed-arity mnemonics; "u" is handled separately.
int preset_arity(const std::string& name) {
    if (name == "h" || name == "x" || name == "y" || name == "z" || name == "s" ||
        name == "sdg" || name == "t" || name == "tdg")
        return 1;
    if (name == "cx" || name == "cz" || name == "swap") return 2;
    return -1;
}

Gate build_preset(const std::string& name, const std::vector<std::size_t>& t) {
    if (name == "h") return gates::h(t[0]);
    if (name == "x") return gates::x(t[0]);
    if (name == "y") return gates::y(t[0]);
    if (name == "z") return gates::z(t[0]);
    if (name == "s") return gates::s(t[0]);
    if (name == "sdg") return gates::sdg(t[0]);
    if (name == "t") return gates::t(t[0]);
    if (name == "tdg") return gates::tdg(t[0]);
    if (name == "cx") return gates::cx(t[0], t[1]);
    if (name == "cz") return gates::cz(t[0], t[1]);
    return gates::swap(t[0], t[1]);
}

}  // namespace

namespace detail {

std::vector<Gate> parse_gate_list(parse::Cursor& cur) {
    std::vector<Gate> out;
    for (;;) {
        const parse::Token& head = cur.take("gate mnemonic or 'end'");
        if (head.text == "end") return out;
        const int arity = preset_arity(head.text);
        if (arity > 0) {
            std::vector<std::size_t> targets;
            for (int i = 0; i < arity; ++i) targets.push_back(cur.take_size("target qubit"));
            out.push_back(build_preset(head.text, targets));
            continue;
        }
        if (head.text == "u") {
            const std::size_t k = cur.take_size("target count");
            if (k == 0 || k > 16)
                throw parse_error("unreasonable target count for 'u'", head.line, head.column);
            std::vector<std::size_t> targets;
            for (std::size_t i = 0; i < k; ++i) targets.push_back(cur.take_size("target qubit"));
            const std::size_t d = std::size_t{1} << k;
            ComplexMatrix m(d, d);
            for (std::size_t i = 0; i < d * d; ++i) {
                const parse::Token& t = cur.take("matrix entry");
                cplx z;
                if (!parse_complex_token(t.text, z))
                    throw parse_error("bad complex entry '" + t.text + "'", t.line, t.column);
                m.data()[i] = z;
            }
            out.push_back(gates::u(std::move(targets), std::move(m)));
            continue;
        }
        throw parse_error("unknown gate '" + head.text + "'", head.line, head.column);
    }
}

void serialize_gates(std::ostream& os, const std::vector<Gate>& gates) {
    for (const Gate& g : gates) {
        if (g.mnemonic == "u") {
            os << "u " << g.targets.size();
            for (std::size_t t : g.targets) os << " " << t;
            os << "\n";
            for (std::size_t r = 0; r < g.matrix.rows(); ++r) {
                os << " ";
                for (std::size_t c = 0; c < g.matrix.cols(); ++c)
                    os << " " << format_complex(g.matrix(r, c));
                os << "\n";
            }
        } else {
            os << g.mnemonic;
            for (std::size_t t : g.targets) os << " " << t;
            os << "\n";
        }
    }
    os << "end\n";
}

}  // namespace detail

Circuit parse_circuit(std::string_view text) {
    const std::vector<parse::Token> toks = parse::tokenize(text);
    parse::Cursor cur(toks);
    cur.expect_word("circuit");
    Circuit c;
    c.width = cur.take_size("circuit width");
    if (cur.peek_is("outputs")) {
        cur.take("outputs");
        while (cur.peek_is_size()) c.outputs.push_back(cur.take_size("output qubit"));
    } else {
        for (std::size_t q = 0; q < c.width; ++q) c.outputs.push_back(q);
    }
    c.gates = detail::parse_gate_list(cur);
    if (!cur.done()) cur.fail("trailing content after 'end'");
    validate_circuit(c);
    return c;
}

std::string serialize_circuit(const Circuit& c) {
    std::ostringstream os;
    os << "circuit " << c.width << "\n";
    os << "outputs";
    for (std::size_t q : c.outputs) os << " " << q;
    os << "\n";
    detail::serialize_gates(os, c.gates);
    return os.str();
}

}  // namespace qsd
