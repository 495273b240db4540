#ifndef SFTID_ERRORS_HPP
#define SFTID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sftid {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed matrices, lexicon mismatches, failed preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An eigen-solve or bisection failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A state the math says cannot happen (e.g. no periodic orbit separating two
/// comparable primitive grammars).
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace sftid

#endif
