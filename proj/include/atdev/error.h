#pragma once

#include <stdexcept>
#include <string>

namespace atdev {

// Base for every error the library raises on purpose. The CLI maps the
// subclasses onto exit codes (see README).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: parse failures, invariant violations, degenerate columns.
class DataError : public Error {
 public:
  using Error::Error;
};

// A model backend failed: spawn failure, protocol violation, bad weights file.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or a diverging fit.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid arguments or configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace atdev
