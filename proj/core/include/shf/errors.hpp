#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shf {

/// Input outside the domain of an operation (bad frequency, invariant
/// violation, inconsistent config value).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A well-posed computation that did not produce a result: no resonance in
/// range, non-finite model evaluation, unresolved passband.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. line() is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace shf
