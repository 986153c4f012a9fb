#pragma once

#include <stdexcept>
#include <string>

namespace levyexit {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or input violates a stated invariant. The message names the
/// invariant. The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a mathematical function (e.g. the pole of
/// the immune term at x = -1).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A numerical procedure failed: singular matrix, quadrature that did not
/// converge, a solution outside its admissible range. CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace levyexit
