#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finslerlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the smooth domain of an expression (log/sqrt of a
/// non-positive value, division by zero, non-integer power of a non-positive base).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A chart, space or manifold description violates a structural requirement.
class InvalidSpace : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

}  // namespace finslerlab
