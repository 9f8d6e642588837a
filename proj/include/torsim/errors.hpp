#pragma once

#include <stdexcept>

namespace torsim {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input value violates an operation precondition.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// A state object violates its invariants (uncertainty bound, normalization, ...).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Grids of two operands are incompatible.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Non-negligible state mass falls outside the requested grid.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or produced an unusable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Fock-space truncation loses more mass than allowed.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or parameter file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace torsim
