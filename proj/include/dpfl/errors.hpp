#pragma once

#include <stdexcept>

namespace dpfl {

// Invalid configuration or argument outside an operation's stated domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure detected at runtime (overflow, non-finite values,
// non-convergent integration).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpfl
