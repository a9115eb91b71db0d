#pragma once

#include <stdexcept>

namespace cospec {

// Base class for all input/parameter errors raised by the library.
// The CLI maps these to exit code 1 (domain error), as opposed to
// usage errors (bad flags), which exit with code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cospec
