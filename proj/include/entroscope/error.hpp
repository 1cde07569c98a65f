#pragma once

#include <stdexcept>
#include <string>

namespace entroscope {

/// Base of every error raised by the library. Each subclass maps to one
/// CLI exit code (see ExitCode in runner.hpp).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions (sizes, ranges, weights).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Solver failure or a state that fails a numerical validity check.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Filesystem failures and unreadable files.
class IoError : public Error {
public:
  using Error::Error;
};

/// Spectrum file with a bad magic number, version or header.
class FormatError : public IoError {
public:
  using IoError::IoError;
};

/// Spectrum file whose checksum does not match its payload (including truncation).
class ChecksumError : public FormatError {
public:
  using FormatError::FormatError;
};

/// Spectrum file that does not belong to the model it is loaded for.
class BasisMismatchError : public FormatError {
public:
  using FormatError::FormatError;
};

} // namespace entroscope
