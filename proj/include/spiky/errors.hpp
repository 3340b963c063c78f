#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spiky {

// Malformed or empty input data (bad edge list line, unknown label, ...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Numeric failure: degenerate probability distribution, non-convergence,
// metric undefined on the given input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spiky
