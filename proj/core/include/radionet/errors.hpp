#pragma once

#include <stdexcept>
#include <string>

namespace radionet {

/// Bad argument or precondition violation reported to the caller.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A randomized generator exhausted its retry budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not available in the simulator's current fidelity mode.
class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Something that is impossible by construction happened anyway.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace radionet
