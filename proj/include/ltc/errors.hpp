#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltc {

/// Raised when an iterate, gradient or intermediate value stops being finite,
/// or when an iterative routine fails to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  /// Final residual for iteration-cap failures, 0 otherwise.
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A horizon T (or other input) does not satisfy a schedule's preconditions.
class ScheduleError : public std::invalid_argument {
 public:
  explicit ScheduleError(const std::string& what, std::size_t min_horizon = 0)
      : std::invalid_argument(what), min_horizon_(min_horizon) {}

  /// Smallest admissible T when the failure is a horizon bound, 0 otherwise.
  std::size_t min_horizon() const noexcept { return min_horizon_; }

 private:
  std::size_t min_horizon_;
};

/// Invalid experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ltc
