#ifndef ITERMEAN_ERRORS_HPP
#define ITERMEAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace itermean {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct MonotonicityError : std::runtime_error {
    explicit MonotonicityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeneratorClassError : std::runtime_error {
    explicit GeneratorClassError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parse failure with the byte offset of the offending token.
struct ParseError : std::runtime_error {
    ParseError(std::size_t position, const std::string& msg, std::string expected = {})
        : std::runtime_error("parse error at offset " + std::to_string(position) + ": " + msg),
          position(position), message(msg), expected(std::move(expected)) {}
    std::size_t position;
    std::string message;
    std::string expected;
};

} // namespace itermean

#endif
