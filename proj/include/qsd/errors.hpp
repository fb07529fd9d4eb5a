#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsd {

// Base class for everything the library throws on purpose.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments or violated preconditions (shape mismatch, non-unitary gate, ...).
class argument_error : public error {
public:
    using error::error;
};

// A requested object exceeds the configured dimension caps.
class capacity_error : public error {
public:
    using error::error;
};

// An iteration failed to converge or produced an inconsistent result.
class numeric_error : public error {
public:
    using error::error;
};

// The requested precision is not reachable in double arithmetic.
class precision_error : public error {
public:
    using error::error;
};

// The instance falls outside the implemented special cases.
class unsupported_error : public error {
public:
    using error::error;
};

// Text input rejected; carries the 1-based position of the offending token.
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t line, std::size_t column)
        : error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace qsd
