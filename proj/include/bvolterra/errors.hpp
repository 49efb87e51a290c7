#pragma once

#include <stdexcept>
#include <string>

namespace bvolterra {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation was called on inputs that violate its stated hypotheses.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A postcondition that the mathematics guarantees did not hold. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bvolterra
