#pragma once

#include <stdexcept>
#include <string>

namespace faultline {

/// Base for all framework-side failures. Injected faults deliberately do
/// not derive from this type; they impersonate client exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownInterfaceError : public Error {
 public:
  using Error::Error;
};

class UnknownMethodError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ExhaustedError : public Error {
 public:
  using Error::Error;
};

class ContractViolationError : public Error {
 public:
  using Error::Error;
};

class StaleHandleError : public Error {
 public:
  using Error::Error;
};

class OutsideIterationError : public Error {
 public:
  using Error::Error;
};

class BaselineFailedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Thrown by test assertions; the explorer classifies it as a test failure
/// rather than an unexpected error.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace faultline
