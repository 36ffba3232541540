#pragma once

#include <stdexcept>
#include <string>

namespace mpak {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter record or argument outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input that is structurally wrong (dimension mismatch, non-symmetric matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine produced a result violating its own postconditions.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The operation does not apply to the given input (e.g. finite R_max for a test
/// that needs a complete model).
class NotApplicable : public Error {
 public:
  using Error::Error;
};

}  // namespace mpak
