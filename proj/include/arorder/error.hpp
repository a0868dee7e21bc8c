#pragma once

#include <stdexcept>
#include <string>

namespace arorder {

// Every failure raised by the library carries a short machine-readable code
// (e.g. "invalid_argument", "enumeration_cap", "no_convergence") so the CLI
// can print a stable error line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

inline Error invalid_argument(const std::string& message) {
  return Error("invalid_argument", message);
}

}  // namespace arorder
