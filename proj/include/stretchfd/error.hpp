#pragma once

#include <stdexcept>
#include <string>

namespace stretchfd {

/// Invalid numeric input (non-finite values, negative volatility, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A stretching, placement or contract description violates its invariants.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Building a map or grid failed (knot collapse, bracket failure, ...).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear algebra or time-stepping failure.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stretchfd
