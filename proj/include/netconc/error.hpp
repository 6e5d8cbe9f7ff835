#pragma once

#include <stdexcept>
#include <string>

namespace netconc {

enum class ErrorKind {
  invalid_input,     // bad arguments to an operation
  invalid_spec,      // a spec object violates its invariants
  unsupported,       // operation not defined for these parameters (e.g. q != 2)
  budget_exceeded,   // enumeration / search budget exhausted
  infeasible_spec,   // rejection sampling cannot produce a sample
  degenerate_graph,  // functional undefined on this graph (m = 0)
  invalid_move_kind, // move kind incompatible with the constraint
  config_error,      // CLI config fails schema validation
  io_error,          // file read/write failure
};

constexpr const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::infeasible_spec: return "infeasible-spec";
    case ErrorKind::degenerate_graph: return "degenerate-graph";
    case ErrorKind::invalid_move_kind: return "invalid-move-kind";
    case ErrorKind::config_error: return "config-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace netconc
