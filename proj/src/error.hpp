#pragma once

#include <stdexcept>
#include <string>

namespace lcsim {

// Invalid parameters, configuration or preconditions. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed checkpoint or other persisted data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The numerical state can no longer be trusted (vanishing director, excessive
// remap loss, NaN in a place where it cannot be flagged).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcsim
