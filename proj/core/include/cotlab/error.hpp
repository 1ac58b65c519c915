#pragma once

#include <stdexcept>
#include <string>

namespace cotlab {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedInput : public Error {
 public:
  using Error::Error;
};

class IncompatibleInput : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NonAdmissibleIdeal : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Raised when the idempotent search can neither split a module nor certify
// that its endomorphism ring is local.
class UndecidedDecomposition : public Error {
 public:
  using Error::Error;
};

}  // namespace cotlab
