#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

// Invalid parameters or configuration; raised before any computation starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure produced a non-finite value or could not proceed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ODE integration stopped early. `last_valid` is the last abscissa reached.
class IntegrationError : public NumericError {
 public:
  IntegrationError(const std::string& what, double last_valid)
      : NumericError(what), last_valid_(last_valid) {}

  double last_valid() const noexcept { return last_valid_; }

 private:
  double last_valid_;
};

// Evaluation requested too close to the blowup time T/C.
class BlowupGuardError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Reading or writing an output file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blowup
