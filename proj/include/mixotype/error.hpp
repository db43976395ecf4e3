#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixotype {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression or model text. `offset()` is a byte offset into the
/// parsed source.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A quantity could not be evaluated at the requested point (log of a
/// non-positive value, division by zero, point outside a required regime...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed to converge.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace mixotype
