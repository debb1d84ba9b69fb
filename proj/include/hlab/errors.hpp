#pragma once

#include <stdexcept>
#include <string>

namespace hlab {

/// Invalid user-supplied configuration (grid extents, time steps, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time integration produced non-finite or runaway values.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time, std::size_t step)
      : std::runtime_error(what), time_(time), step_(step) {}

  double time() const noexcept { return time_; }
  std::size_t step() const noexcept { return step_; }

 private:
  double time_;
  std::size_t step_;
};

}  // namespace hlab
