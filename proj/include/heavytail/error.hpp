#pragma once

#include <stdexcept>
#include <string>

namespace heavytail {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative solver exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few (or degenerate) observations for the requested statistic.
class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A search left the range where the transform is representable in double.
class OverflowRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heavytail
