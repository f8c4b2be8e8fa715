#pragma once

#include <stdexcept>
#include <string>

namespace charpath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed arguments, mismatched shapes, out-of-range indices.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotPrime : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ZeroIndex : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class PrincipalCharacter : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// |n| != |m| where a balanced moment is required.
class ParityMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A configured compute or table limit would be exceeded.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

class Overflow : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

class CapacityExceeded : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

class TooLarge : public LimitExceeded {
 public:
  using LimitExceeded::LimitExceeded;
};

/// Cache file present but unreadable or inconsistent.
class CacheError : public Error {
 public:
  using Error::Error;
};

}  // namespace charpath
