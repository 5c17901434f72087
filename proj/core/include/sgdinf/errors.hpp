#pragma once

#include <stdexcept>

namespace sgdinf {

// Invalid parameters or misconfigured run (CLI exit code 1).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or missing input data (CLI exit code 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure, e.g. a singular covariance estimate (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sgdinf
