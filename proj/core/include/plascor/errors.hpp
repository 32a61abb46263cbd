#pragma once

#include <stdexcept>
#include <string>

namespace plascor {

/// Bad user-supplied parameter (out-of-range material constant, invalid ratio, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (files, load histories, id sets).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A requested operation needs data the record does not carry.
class CapabilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Filesystem trouble (unreadable input, unwritable output).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (non-convergence) local to one point and time step.
struct PointFailure {
  std::string point_id;
  std::size_t time_index = 0;
  std::string what;
};

} // namespace plascor
