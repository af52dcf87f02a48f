#pragma once

#include <stdexcept>
#include <string>

namespace ncstokes {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Topology / input errors.
class NonConforming : public Error {
public:
    using Error::Error;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class DegenerateElement : public Error {
public:
    using Error::Error;
};

class InconsistentBC : public Error {
public:
    using Error::Error;
};

// Numerical failures. The CLI maps every NumericalError to exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IterationDivergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotPositiveDefinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EigenNonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EmptySequence : public Error {
public:
    using Error::Error;
};

} // namespace ncstokes
