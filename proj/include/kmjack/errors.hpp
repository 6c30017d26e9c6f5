#pragma once

#include <stdexcept>
#include <string>

namespace kmjack {

// Bad user input: malformed files, invalid options, incompatible study setup.
// The CLI maps these to exit code 2.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numeric failure at runtime: singular fits, calibration that cannot bracket,
// rejection sampling that never accepts. The CLI maps these to exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kmjack
