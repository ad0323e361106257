#pragma once

#include <stdexcept>
#include <string>

namespace vlcurate {

// Raised when caller-supplied data violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace vlcurate
