#pragma once

#include <stdexcept>
#include <string>

namespace folner {

/// Input violates an operation's precondition or a type invariant.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size bound (degree, enumeration count, big-integer bits) would be exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operation is mathematically unavailable for these parameters (e.g. A_d not perfect for d < 5).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace folner
