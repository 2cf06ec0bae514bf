#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contagion {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: violated precondition, malformed parameters, unknown ids.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Structured loader error pointing at a file row (1-based line number,
/// 0 when the problem is not tied to a row).
class ParseError : public ValidationError {
public:
    ParseError(std::string file, std::size_t row, std::string column, const std::string& what)
        : ValidationError(format(file, row, column, what)),
          file_(std::move(file)), row_(row), column_(std::move(column)) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    static std::string format(const std::string& file, std::size_t row,
                              const std::string& column, const std::string& what) {
        std::string out = file;
        if (row > 0) out += ":" + std::to_string(row);
        if (!column.empty()) out += " [" + column + "]";
        return out + ": " + what;
    }

    std::string file_;
    std::size_t row_;
    std::string column_;
};

/// Solver failure (e.g. iteration budget exhausted).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace contagion
