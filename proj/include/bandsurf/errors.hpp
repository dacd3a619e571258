#pragma once

#include <stdexcept>
#include <string>

namespace bandsurf {

/// Inputs violate a precondition that depends on the data (empty zero set,
/// under-sampled surface, ...). The CLI maps these to exit code 2.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure broke down (divergence, singular system). Exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                                ", got " + std::to_string(got)) {}
};

class NoZeroSetFound : public DomainError {
public:
    using DomainError::DomainError;
};

class EmptyCloud : public DomainError {
public:
    EmptyCloud() : DomainError("point cloud is empty") {}
};

/// Null space of the minimal lifting has dimension > 1 (under-sampled).
class AmbiguousRecovery : public DomainError {
public:
    AmbiguousRecovery(std::size_t null_dim)
        : DomainError("ambiguous recovery: null space dimension " + std::to_string(null_dim)),
          null_dim_(null_dim) {}
    std::size_t null_dim() const { return null_dim_; }

private:
    std::size_t null_dim_;
};

/// Null space is trivial: support too small or samples are off-surface.
class NoAnnihilator : public DomainError {
public:
    NoAnnihilator() : DomainError("no annihilating polynomial: null space is empty") {}
};

class InsufficientCandidates : public DomainError {
public:
    using DomainError::DomainError;
};

class NonFiniteObjective : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line), detail_(what) {}
    /// Same error, reported against a file name.
    ParseError(const std::string& file, const ParseError& inner)
        : std::runtime_error(file + ": " + inner.what()), line_(inner.line_), detail_(inner.detail_) {}
    std::size_t line() const { return line_; }
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

} // namespace bandsurf
