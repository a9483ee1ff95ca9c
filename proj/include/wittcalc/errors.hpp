#pragma once

#include <stdexcept>
#include <string>

namespace wittcalc {

/// Category of an engine failure. The CLI maps these onto exit codes:
/// parse/io errors exit with 2, everything else with 1.
enum class ErrorKind {
  Structural,    // objects living on mismatched lattices, schemes or rings
  Domain,        // input outside the mathematical domain (e.g. c < 2)
  Validation,    // a stated identity does not hold on the given data
  Precondition,  // an operation was called outside its parity/case
  Assumption,    // a required regularity or hypothesis flag is missing
  Internal,      // an invariant the engine guarantees was violated
  Parse,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace wittcalc
