#pragma once

#include <stdexcept>
#include <string>

namespace bff {

// Thrown when an iterative numeric routine (quadrature, root search, series)
// fails to reach its tolerance. The message carries diagnostics.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by file/stream readers; remembers the offending 1-based row.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row)
        : std::runtime_error(what + " (row " + std::to_string(row) + ")"), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

} // namespace bff
