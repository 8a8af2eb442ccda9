#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uconvex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside the domain of an expression or function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value left the representable range (e.g. above phi(T_max)).
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Bad user input: invalid parameters, mismatched sizes, out-of-domain queries.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A modulus method was requested whose hypotheses are not certified.
class RouteUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace uconvex
