#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svmlab {

/// Base class for runtime failures raised by the library. Precondition
/// violations by the caller are reported as std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed sparse text input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An iterative procedure hit its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A closed-form quantity was requested outside its domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A persisted model could not be read back.
class ModelFormatError : public Error {
public:
    using Error::Error;
};

} // namespace svmlab
