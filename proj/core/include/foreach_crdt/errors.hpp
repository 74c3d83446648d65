#pragma once

#include <stdexcept>
#include <string>

namespace foreach_crdt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (index out of range, empty
// interval, non-positive multiplier, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// An operation was routed to an element state of the wrong kind.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A message was offered for delivery out of causal order or more than once.
class CausalityError : public Error {
 public:
  using Error::Error;
};

// Internal state would violate an invariant (e.g. a duplicate position).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A history or schedule is internally inconsistent (clock gaps, missing
// causal predecessors, duplicated dots).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input. `line` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace foreach_crdt
