#pragma once

#include <stdexcept>
#include <string>

namespace tangentlab {

// Structural misuse: states on different grids, dimension mismatches.
class GridMismatchError : public std::invalid_argument {
 public:
  explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// A state or chart violates a domain precondition (tail clipping, chart
// coordinates outside the grid interior, degenerate width).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A numerical procedure failed to meet its contract (solver residual,
// non-finite amplitudes).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Gram matrix too ill-conditioned to solve the projection reliably.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double condition)
      : std::runtime_error(what), condition_number(condition) {}
  double condition_number;
};

// Invalid experiment configuration (bad value, unknown key, CFL violation).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tangentlab
