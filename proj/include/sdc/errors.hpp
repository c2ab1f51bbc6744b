#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A matrix that must be unitary is not; carries the max-abs entry of U^dagger U - I.
class NonUnitary : public InvalidArgument {
public:
    NonUnitary(const std::string& what, double residual)
        : InvalidArgument(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A state handed to a decoder is not (close to) a code word.
class NoMatch : public Error {
public:
    NoMatch(const std::string& what, std::string block, double overlap)
        : Error(what), block_(std::move(block)), overlap_(overlap) {}

    /// Which register block failed ("ghz", "bell[2]", "register", ...).
    const std::string& block() const noexcept { return block_; }
    /// Largest overlap magnitude that was found.
    double overlap() const noexcept { return overlap_; }

private:
    std::string block_;
    double overlap_;
};

/// The request is well-formed but outside what the library can answer correctly.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed (for example renormalizing a zero-probability branch).
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace sdc
