#pragma once

#include <stdexcept>
#include <string>

namespace bgkmix {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or incomplete user configuration. Maps to CLI exit code 1.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Mixture parameters outside the temperature-positivity region.
class AdmissibilityError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// Runtime numerics failure (maps to CLI exit code 2).
class NumericsError : public Error {
public:
  using Error::Error;
};

class ZeroDensityError : public NumericsError {
public:
  using NumericsError::NumericsError;
};

class VacuumError : public NumericsError {
public:
  using NumericsError::NumericsError;
};

class DegenerateTemperatureError : public NumericsError {
public:
  using NumericsError::NumericsError;
};

/// An estimate constant blows up for the given parameters (bound is vacuous).
class ConstantDegenerateError : public NumericsError {
public:
  using NumericsError::NumericsError;
};

class PreconditionError : public NumericsError {
public:
  using NumericsError::NumericsError;
};

/// A simulation trace lacks the fields an envelope check needs.
class DiagnosticError : public NumericsError {
public:
  using NumericsError::NumericsError;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace bgkmix
