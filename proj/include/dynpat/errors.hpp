#pragma once

#include <stdexcept>
#include <string>

namespace dynpat {

/// Bad input: a spec, window, or configuration that violates a precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed or produced a result outside its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynpat
