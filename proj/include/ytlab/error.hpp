#pragma once

#include <stdexcept>
#include <string>

namespace ytlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the domain of the operation.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Input data (words, files, matrices) violates an operation precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An exact enumeration or dynamic program would exceed its size budget.
class SizeGuard : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is identically trivial for this input.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A growth rule is not in power/log-power form.
class UnsupportedRule : public Error {
 public:
  using Error::Error;
};

/// A stored summary disagrees with the data it was computed from.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ytlab
