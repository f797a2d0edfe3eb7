#pragma once

#include <stdexcept>
#include <string>

namespace namedis {

// Bad input: malformed files, invalid parameters, referential violations.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A library invariant did not hold. The CLI maps these to exit code 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace namedis
