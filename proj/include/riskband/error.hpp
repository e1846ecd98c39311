#pragma once

#include <stdexcept>
#include <string>

namespace riskband {

/// Failure categories. The CLI maps each one to a distinct exit status.
enum class ErrorCode {
  InvalidArgument = 3,  ///< malformed request: bad shapes, unknown names
  Domain = 4,           ///< value outside the operation's domain
  Parse = 5,            ///< unreadable CSV/JSON content
  Io = 6,               ///< missing or unwritable file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace riskband
