#pragma once

#include <stdexcept>
#include <string>

namespace ldspec {

/// Failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
  Usage,          // invalid parameter ranges, unknown names
  Domain,         // argument outside an operator's domain
  Normalization,  // measure not supported in [1, inf)
  Input,          // non-finite or malformed data
  Capability,     // numerical method cannot represent the request
  Bounded         // no strict inclusion exists for a bounded operator
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Input: return "input";
    case ErrorKind::Capability: return "capability";
    case ErrorKind::Bounded: return "bounded";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool cond, ErrorKind k, const std::string& msg) {
  if (!cond) fail(k, msg);
}

}  // namespace ldspec
