#pragma once

#include <stdexcept>
#include <string>

namespace hpencil {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression source; carries the byte offset of the failure.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Evaluation outside a function's domain (log of non-positive, sqrt of
/// negative, division by zero) or overflow to a non-finite value.
class EvalError : public Error {
public:
  using Error::Error;
};

/// Invalid problem data: bad coefficients, bad bounds, bad flags.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A numerical routine failed to produce a usable result.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace hpencil
