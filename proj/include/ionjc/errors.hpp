#pragma once

#include <stdexcept>
#include <string>

namespace ionjc {

/// Raised when a numerical validation fails (hermiticity, unitarity, convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for a drive with zero Rabi frequency where the balanced
/// transformation is undefined; use the free Hamiltonian instead.
class NoDriveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid experiment configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace ionjc
