#pragma once

#include <stdexcept>
#include <string>

namespace glab {

// Root of every error thrown by the library. The CLI maps the subclasses
// below onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad dimension, cutoff, site index, or any other precondition violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SymmetryError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Requested Hilbert-space dimension exceeds the configured memory cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Iterative kernel failed to converge, or a state was annihilated by a probe.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace glab
