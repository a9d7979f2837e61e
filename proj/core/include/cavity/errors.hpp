#pragma once

#include <stdexcept>
#include <string>

namespace cavity {

/// Malformed configuration or command line (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration size, node count or similar cap was exceeded (exit code 3).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root finder or solver failed to converge (exit code 4).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process exit codes of the cavity tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitBudget = 3,
  kExitNumerical = 4,
};

}  // namespace cavity
