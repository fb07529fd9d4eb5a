#include "qsd/matrix.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "parse_util.hpp"
#include "qsd/config.hpp"
#include "qsd/errors.hpp"
#include "qsd/kernels.hpp"

namespace qsd {

namespace config {

namespace {
std::size_t g_max_matrix_dim = std::size_t(1) << 12;
int g_max_state_qubits = 22;
}  // namespace

std::size_t max_matrix_dim() { return g_max_matrix_dim; }
void set_max_matrix_dim(std::size_t dim) { g_max_matrix_dim = dim; }
int max_state_qubits() { return g_max_state_qubits; }
void set_max_state_qubits(int qubits) { g_max_state_qubits = qubits; }

}  // namespace config

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) throw argument_error("trace requires a square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    if (!is_square()) return false;
    ComplexMatrix g = adjoint() * (*this);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const cplx want = (r == c) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs(g(r, c) - want) > tol) return false;
        }
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw argument_error("matrix shape mismatch in +");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw argument_error("matrix shape mismatch in -");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw argument_error("matrix shape mismatch in *");
    if (a.rows() > config::max_matrix_dim() || b.cols() > config::max_matrix_dim())
        throw capacity_error("matrix product exceeds the configured dimension cap");
    ComplexMatrix c(a.rows(), b.cols());
    kernels::active().matmul(c.data(), a.data(), b.data(), a.rows(), a.cols(), b.cols());
    return c;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& z : amps) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix outer(const std::vector<cplx>& v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t r = 0; r < v.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
    return m;
}

ComplexMatrix outer(const StateVector& v) { return outer(v.amps); }

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw argument_error("state dimension mismatch in inner product");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

// --- complex entry grammar -------------------------------------------------

namespace {

// number := decimal float | integer ratio "p/q"; cursor advances past it.
// The sign is peeled off by hand: from_chars never accepts a leading '+'.
bool parse_number(std::string_view s, std::size_t& pos, double& out) {
    std::size_t i = pos;
    double sign = 1.0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sign = -1.0;
        ++i;
    }
    const std::size_t digits_start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
    if (i == digits_start) return false;
    if (i < s.size() && s[i] == '/') {
        // ratio: both sides integral
        double num = 0.0;
        auto [p1, e1] = std::from_chars(s.data() + digits_start, s.data() + i, num);
        if (e1 != std::errc() || p1 != s.data() + i) return false;
        std::size_t j = ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == j) return false;
        double den = 0.0;
        auto [p2, e2] = std::from_chars(s.data() + j, s.data() + i, den);
        if (e2 != std::errc() || p2 != s.data() + i || den == 0.0) return false;
        out = sign * (num / den);
        pos = i;
        return true;
    }
    // decimal, allow exponent
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    }
    double v = 0.0;
    auto [p, e] = std::from_chars(s.data() + digits_start, s.data() + i, v);
    if (e != std::errc() || p != s.data() + i) return false;
    out = sign * v;
    pos = i;
    return true;
}

}  // namespace

bool parse_complex_token(std::string_view token, cplx& out) {
    std::size_t pos = 0;
    double first = 0.0;
    if (!parse_number(token, pos, first)) return false;
    if (pos == token.size()) {
        out = cplx(first, 0.0);
        return true;
    }
    if (token[pos] == 'j') {
        if (pos + 1 != token.size()) return false;
        out = cplx(0.0, first);
        return true;
    }
    if (token[pos] != '+' && token[pos] != '-') return false;
    double second = 0.0;
    if (!parse_number(token, pos, second)) return false;
    if (pos + 1 != token.size() || token[pos] != 'j') return false;
    out = cplx(first, second);
    return true;
}

std::string format_complex(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
    std::string s = buf;
    std::snprintf(buf, sizeof buf, "%.17g", std::abs(z.imag()));
    s += (std::signbit(z.imag()) ? '-' : '+');
    s += buf;
    s += 'j';
    return s;
}

// --- matrix file format ----------------------------------------------------

namespace {

ComplexMatrix parse_one_matrix(parse::Cursor& cur) {
    cur.expect_word("matrix");
    const std::size_t rows = cur.take_size("row count");
    const std::size_t cols = cur.take_size("column count");
    if (rows == 0 || cols == 0) cur.fail("matrix dimensions must be positive");
    if (rows > config::max_matrix_dim() || cols > config::max_matrix_dim())
        throw capacity_error("matrix file exceeds the configured dimension cap");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        const parse::Token& t = cur.take("matrix entry");
        cplx z;
        if (!parse_complex_token(t.text, z))
            throw parse_error("bad complex entry '" + t.text + "'", t.line, t.column);
        m.data()[i] = z;
    }
    return m;
}

}  // namespace

ComplexMatrix parse_matrix_file(std::string_view text) {
    const std::vector<parse::Token> toks = parse::tokenize(text);
    parse::Cursor cur(toks);
    ComplexMatrix m = parse_one_matrix(cur);
    if (!cur.done()) cur.fail("trailing content after matrix body");
    return m;
}

std::vector<ComplexMatrix> parse_matrix_blocks(std::string_view text) {
    const std::vector<parse::Token> toks = parse::tokenize(text);
    parse::Cursor cur(toks);
    std::vector<ComplexMatrix> out;
    while (!cur.done()) out.push_back(parse_one_matrix(cur));
    if (out.empty()) throw parse_error("no matrix sections found", 1, 1);
    return out;
}

std::string write_matrix_file(const ComplexMatrix& m) {
    std::ostringstream os;
    os << "matrix " << m.rows() << " " << m.cols() << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << " ";
            os << format_complex(m(r, c));
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace qsd
