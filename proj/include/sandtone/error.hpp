#pragma once

#include <stdexcept>
#include <string>

namespace sandtone {

enum class ErrorKind {
  InvalidInput,  // violated precondition on caller-supplied data
  NotFound,      // unknown id or missing file
  Unsupported,   // undecodable or unsupported media
  TooLarge,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& message) {
  throw Error(ErrorKind::InvalidInput, message);
}

}  // namespace sandtone
