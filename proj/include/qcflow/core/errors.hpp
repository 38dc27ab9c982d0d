#pragma once

#include <stdexcept>
#include <string>

namespace qcflow {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or violated preconditions.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Evaluation requested outside the evaluable domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite values produced where finite ones are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Trajectory left the evaluable domain; carries seed index and exit time.
class EscapeError : public DomainError {
 public:
  EscapeError(std::size_t seed_index, double exit_time, const std::string& what)
      : DomainError(what), seed_index(seed_index), exit_time(exit_time) {}
  std::size_t seed_index;
  double exit_time;
};

// Adaptive step size collapsed below the floor.
class StiffnessError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A quantity that must stay away from zero degenerated.
class DegeneracyError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Requested computation exceeds a configured size guard.
class SizeError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Too many nodes mapped outside the source data during composition.
class CoverageError : public DomainError {
 public:
  CoverageError(double clipped_fraction, const std::string& what)
      : DomainError(what), clipped_fraction(clipped_fraction) {}
  double clipped_fraction;
};

// Compact-support precondition violated (data touches the boundary band).
class SupportError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Configuration file problems: parse errors, missing files, bad values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File format / IO problems.
class IoError : public Error {
 public:
  using Error::Error;
};

// A priori bound exceeded the overflow threshold.
class UnboundedGrowthError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace qcflow
