#pragma once

#include <stdexcept>
#include <string>

namespace tlsopt {

/// Base class for every error raised by the library. `exit_code()` is the
/// process status the CLI reports for it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const { return 1; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidCurve : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

/// Geometry violates a well-formedness or footprint constraint. The
/// optimizer maps it to the sentinel objective value.
class InfeasibleGeometry : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class MeshError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

class SolverError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

/// Too many objective evaluations failed for the run to mean anything.
class OptimizationAborted : public SolverError {
 public:
  using SolverError::SolverError;
};

/// The transmon frequency relation has no real root for the given inputs.
class NoSolution : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

class ConstraintUnsatisfied : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 5; }
};

}  // namespace tlsopt
