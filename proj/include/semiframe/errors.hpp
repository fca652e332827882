#pragma once

#include <stdexcept>
#include <string>

namespace semiframe {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index out of range, dimension or space mismatch.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its stated precondition (x = 0, bad p, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Enumeration requested above the supported dimension cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Invalid generator spec or inconsistent system data.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRepresentation : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON or flag text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace semiframe
