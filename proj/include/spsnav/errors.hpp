#pragma once

#include <stdexcept>

namespace spsnav {

// A caller broke a documented precondition (bad frame, mismatched shapes...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Malformed data handed to a kernel (events off the sensor, negative distances...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Procedural scene generation could not satisfy the requested spec.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid benchmark configuration. The message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spsnav
