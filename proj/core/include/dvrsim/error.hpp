#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dvrsim {

// Raised for parameters that violate a model invariant (non-positive base,
// negative load power, malformed schedule, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when the numerics cannot proceed: singular matrices, exponent
// overflow, non-finite state.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A NumericalError annotated with where in the run it happened.
class StepError : public NumericalError {
 public:
  StepError(std::size_t step, double time, const std::string& what)
      : NumericalError("step " + std::to_string(step) + " (t=" +
                       std::to_string(time) + " s): " + what),
        step_(step),
        time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

}  // namespace dvrsim
