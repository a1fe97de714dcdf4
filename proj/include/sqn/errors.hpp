#pragma once

#include <stdexcept>
#include <string>

namespace sqn {

/// Bad argument values, mismatched dimensions, or invalid configuration.
class InvalidInputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A curvature update was requested for a zero or non-finite displacement.
class DegenerateStepError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared where finite ones are required.
class NumericalFailureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File opened fine but its contents are malformed.
class FormatError : public IoError {
  public:
    using IoError::IoError;
};

/// Command-line misuse; maps to exit code 1.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace sqn
