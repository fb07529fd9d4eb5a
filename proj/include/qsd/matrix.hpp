#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qsd/complex_format.hpp"

namespace qsd {

// Dense row-major complex matrix. Small and value-typed on purpose: every
// state and operator in this library fits comfortably in memory once the
// capacity caps are respected, so there is no sparsity or view machinery.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    cplx trace() const;
    double max_abs() const;
    double frobenius_norm() const;

    bool is_hermitian(double tol = 1e-9) const;
    bool is_unitary(double tol = 1e-9) const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    // Exact structural equality (bit-for-bit entries); round-trip tests use it.
    bool operator==(const ComplexMatrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// Pure state amplitudes over qubits; dim is always a power of two and
// index bit order puts qubit 0 in the most significant position.
struct StateVector {
    std::vector<cplx> amps;

    StateVector() = default;
    explicit StateVector(std::size_t dim) : amps(dim) {}

    std::size_t dim() const { return amps.size(); }
    double norm() const;
};

// |v><v| for a (row or column) amplitude vector.
ComplexMatrix outer(const std::vector<cplx>& v);
ComplexMatrix outer(const StateVector& v);
cplx inner(const StateVector& a, const StateVector& b);  // <a|b>

// Matrix file format:
//
//   # optional comments and blank lines
//   matrix <rows> <cols>
//   <rows*cols entries in row-major order, whitespace separated>
//
// Entries follow the complex token grammar in complex_format.hpp, so
// "0.5", "1/2-3/4j" and "2j" are all valid. parse_matrix_blocks reads a
// file holding several consecutive matrix sections (used for Kraus sets).
ComplexMatrix parse_matrix_file(std::string_view text);
std::vector<ComplexMatrix> parse_matrix_blocks(std::string_view text);
std::string write_matrix_file(const ComplexMatrix& m);

}  // namespace qsd
