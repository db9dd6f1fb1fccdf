#pragma once

#include <stdexcept>
#include <string>

namespace mubinfo {

/// Input violates a documented precondition or invariant. The message
/// carries the measured residual where one exists.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative routine failed to converge, or an internal consistency
/// check tripped on otherwise valid input.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mubinfo
