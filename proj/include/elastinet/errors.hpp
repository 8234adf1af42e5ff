#pragma once

#include <stdexcept>
#include <string>

namespace elastinet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Grid too coarse for a stencil, or a sampling that cannot support the operation.
class GridError : public Error {
public:
  using Error::Error;
};

/// A curve whose speed |γ_x| dropped below the regularity threshold.
class RegularityError : public Error {
public:
  using Error::Error;
};

/// Operation applied to the wrong network topology or flavor.
class TopologyError : public Error {
public:
  using Error::Error;
};

/// Input data violates a precondition (admissibility, compatibility, junction matching).
class AdmissibilityError : public Error {
public:
  using Error::Error;
};

/// The assembled linear system is numerically singular.
class SingularSystemError : public Error {
public:
  using Error::Error;
};

/// Malformed snapshot or configuration input.
class FormatError : public Error {
public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace elastinet
