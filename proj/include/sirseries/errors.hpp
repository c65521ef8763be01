#pragma once

#include <stdexcept>
#include <string>

namespace sirseries {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value (NaN or infinity).
struct OverflowError : Error {
  using Error::Error;
};

/// A requested truncation degree exceeds the configured cap.
struct CapacityError : Error {
  using Error::Error;
};

/// An operation was invoked with arguments outside its contract.
struct UsageError : Error {
  using Error::Error;
};

/// An input document is malformed.
struct ParseError : Error {
  using Error::Error;
};

/// A value violates a domain invariant (e.g. a negative rate).
struct ValidationError : Error {
  using Error::Error;
};

/// A numerical integration left the finite range; carries the failing time.
struct DivergenceError : Error {
  DivergenceError(const std::string& what, double time)
      : Error(what), time(time) {}
  double time;
};

}  // namespace sirseries
