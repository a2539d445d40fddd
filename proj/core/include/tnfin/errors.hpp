#pragma once

#include <stdexcept>
#include <string>

namespace tnfin {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or construction parameters (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unusable input data: I/O failures, parse errors, shape mismatches
/// (CLI exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numeric breakdown: degenerate firing, divergence, non-finite values
/// (CLI exit code 4).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tnfin
