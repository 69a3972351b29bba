#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace svmtune {

// Library error carrying a stable, greppable code such as "E_PARSE" or
// "E_DEGENERATE" in addition to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace svmtune
