#pragma once

#include <stdexcept>
#include <string>

namespace ququart {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation (zero vector,
/// amplitude ratio outside [0,1], unsupported basis).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A wavelength or other physical parameter outside a model's valid interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Measurement records that do not fit the requested protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (e.g. non-unitary transform).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ququart
