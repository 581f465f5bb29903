#pragma once

#include <stdexcept>
#include <string>

namespace qprab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A series argument lies outside the region where the series converges.
class ConvergenceDomainError : public DomainError {
public:
    explicit ConvergenceDomainError(const std::string& what)
        : DomainError("convergence domain violated: " + what) {}
};

/// A q-power denominator product vanished.
class DivisionByZero : public DomainError {
public:
    using DomainError::DomainError;
};

/// A truncated series or product hit max_terms before meeting its tolerance.
class NotConverged : public Error {
public:
    using Error::Error;
};

/// The right-hand side of a Cauchy problem is undefined at a required point.
class RhsDomainError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace qprab
