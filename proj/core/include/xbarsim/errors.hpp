#pragma once

#include <stdexcept>
#include <string>

namespace xbarsim {

/// Operand shapes do not agree (non-square input, length mismatch, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A device cannot be used as built, e.g. a column with zero transmission.
class DegenerateDeviceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed interchange documents (JSON devices, matrices, loss models).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration (empty grids, zero sample counts, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical step failed at a specific sweep point.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xbarsim
