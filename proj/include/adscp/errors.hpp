#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adscp {

/// Invalid or malformed input: bad shapes, bad parameters, unusable files.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Too few observations for the requested operation.
class InsufficientDataError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Scan or window parameters do not fit the sequence length.
class WindowError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Text input could not be parsed; carries the 1-based line number
/// (0 when no line applies, e.g. an unreadable file).
class ParseError : public DomainError {
public:
    ParseError(const std::string& message, std::size_t line)
        : DomainError(line > 0 ? message + " (line " + std::to_string(line) + ")" : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A variance estimate degenerated to numerically zero.
class DegenerateVarianceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear system is too ill-conditioned to solve reliably.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension selection returned zero components; there is nothing to reduce.
class EmptyReductionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace adscp
