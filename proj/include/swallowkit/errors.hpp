#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swallowkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text or germ-spec document.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    explicit ParseError(const std::string& what) : Error(what), offset_(0) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A numeric evaluation left its domain: zero denominator, sqrt of a
/// non-positive value, a point outside the space-form model, and so on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The input does not satisfy the precondition of the requested construction.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A sign could not be decided because the value sits inside the tolerance band.
class IndeterminateSign : public Error {
public:
    using Error::Error;
};

}  // namespace swallowkit
