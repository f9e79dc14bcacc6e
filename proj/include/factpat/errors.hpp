#pragma once

#include <stdexcept>
#include <string>

namespace factpat {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands belong to different fields.
class FieldMismatch : public Error {
 public:
  FieldMismatch() : Error("operands belong to different fields") {}
};

/// Precondition on an argument value failed (zero divisor, 0^0, degree too small, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (field, polynomial, family or pattern descriptions).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or sieve would exceed its configured work budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Requested operation is deliberately not supported (e.g. EDF in characteristic 2).
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace factpat
