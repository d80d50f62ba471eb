#pragma once

#include <stdexcept>
#include <string>

namespace minorext {

// Error taxonomy used across the library:
//   input    - malformed arguments (bad sizes, indices, flags)
//   domain   - arguments outside a formula's stated domain
//   capacity - request exceeds a hard enumeration/size guard
enum class ErrKind { input, domain, capacity };

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrKind kind() const noexcept { return kind_; }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) {
  throw Error(ErrKind::input, msg);
}

[[noreturn]] inline void fail_domain(const std::string& msg) {
  throw Error(ErrKind::domain, msg);
}

[[noreturn]] inline void fail_capacity(const std::string& msg) {
  throw Error(ErrKind::capacity, msg);
}

}  // namespace minorext
