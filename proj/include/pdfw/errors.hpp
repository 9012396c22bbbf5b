#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdfw {

/// Violated precondition: bad dimensions, invalid parameters, malformed input.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid experiment configuration or step-size schedule.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver state vector became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_length(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw ContractViolation(std::string(what) + ": expected length " + std::to_string(expected) +
                            ", got " + std::to_string(actual));
  }
}

}  // namespace pdfw
