#pragma once

#include <stdexcept>
#include <string>

namespace lumensep {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad argument, bad
/// dimensions, seed outside its interval, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// No path exists between two endpoints inside the allowed mask.
class DisconnectedError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Subtracting the tear surfaces left fewer than two lumen components.
class NotSeparatedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public IoError {
 public:
  using IoError::IoError;
};

class TruncatedError : public IoError {
 public:
  using IoError::IoError;
};

class UnknownKindError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace lumensep
