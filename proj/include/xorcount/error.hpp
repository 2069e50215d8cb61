#pragma once

#include <stdexcept>
#include <string>

namespace xorcount {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range or inconsistent parameter (density, confidence, sizes).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix widths that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Instance too large for an exhaustive routine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed DIMACS or table-spec text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An external solver produced output we cannot interpret.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A witness failed its in-process recheck. Never recovered from.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// A certificate could not be issued because some oracle calls were unknown.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

}  // namespace xorcount
