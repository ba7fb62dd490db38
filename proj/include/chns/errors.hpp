#pragma once

#include <stdexcept>
#include <string>

namespace chns {

/// Two fields (or a field and an operator) live on incompatible grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs outside an operation's documented preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced or consumed non-finite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CFL heuristic max|u| dt / dx > 1 tripped before a step.
class StabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A backward sweep asked for trajectory data that was never stored.
class ReplayError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace chns
