#pragma once

#include <stdexcept>
#include <string>

namespace tvk {

enum class ErrorKind {
  input,                // malformed arguments, dimension mismatches
  precondition,         // caller violated a documented precondition
  internal,             // states that indicate a bug (e.g. unbounded geometric LP)
  exhaustion,           // certified search ran out of candidates
  size_guard,           // brute-force size limit exceeded
  degenerate_input,     // geometry admits no positive separation quantities
  projection_undefined, // central projection from a point at the same height
  guarantee_violated,   // a theorem-backed step found no conforming object
  invariant_violation,  // a verified postcondition failed
  reduction_failed,     // retry budget exhausted
  parse,                // document syntax/semantics
  generation            // instance generator rejection limit
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

} // namespace tvk
