#pragma once

#include <stdexcept>
#include <string>

namespace pkem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad wire bytes, bad JSON, wrong lengths, nonzero padding bits.
class MalformedError : public Error {
 public:
  using Error::Error;
};

// Parameters that cannot be met, or an enumeration that would exceed its cap.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Operands from two different fields.
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

class KeyReuseError : public Error {
 public:
  using Error::Error;
};

// Oracle budget exceeded, barred query, or duplicate PRF query.
class GameRuleError : public Error {
 public:
  using Error::Error;
};

}  // namespace pkem
