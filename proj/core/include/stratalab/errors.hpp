#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stratalab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Carries the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t pos, const std::string& what)
      : Error("at " + std::to_string(pos) + ": " + what), pos_(pos), reason_(what) {}
  std::size_t position() const noexcept { return pos_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t pos_;
  std::string reason_;
};

// A documented precondition of an operation does not hold for its arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace stratalab
