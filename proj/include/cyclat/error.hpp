#pragma once

#include <stdexcept>
#include <string>

namespace cyclat {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid lattice geometry, or an operation applied to the wrong lattice
// parity / a mismatched lattice.
class LatticeError : public Error {
 public:
  using Error::Error;
};

// Out-of-range construction parameter (widths, centers, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Normalization or a normalized diagnostic requested on an all-zero state.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

// Two evaluations that must agree did not (imaginary residue of a quantity
// that is real by construction, and similar).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Time step outside the hard validity bound of the linearized scheme.
class NumericalGuardError : public Error {
 public:
  using Error::Error;
};

// Malformed run configuration or serialized state.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cyclat
