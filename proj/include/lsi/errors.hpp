#pragma once

#include <stdexcept>
#include <string>

namespace lsi {

// Raised when a numerical procedure cannot produce a trustworthy value
// (non-finite integrand, exhausted search, density below floor).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a probe's tails are not admissible for the requested measure.
class TailViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lsi
