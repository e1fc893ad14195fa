#pragma once

#include <stdexcept>
#include <string>

namespace tpgm {

enum class ErrorKind {
  invalid_argument,
  dimension,
  parse,
  solver,
  size_cap,
  internal,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library. `stage` is filled in by the matcher
// pipeline so callers can tell which step failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string stage = {})
      : std::runtime_error(what), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

  // Copy of this error tagged with a pipeline stage. An existing tag wins so
  // the innermost stage is reported.
  Error with_stage(const std::string& stage) const;

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace tpgm
