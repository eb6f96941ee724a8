#pragma once

#include <stdexcept>
#include <string>

namespace minext {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

/// A matrix expected to be nilpotent failed the power test.
struct NotNilpotentError : Error {
  using Error::Error;
};

/// Inverse Cayley transform hit the boundary of the bounded model.
struct BoundaryPointError : Error {
  using Error::Error;
};

/// Mobius action denominator is singular.
struct ActionUndefinedError : Error {
  using Error::Error;
};

/// Group element has no P+ K_C P- factorization (pivot block singular).
struct NotInBigCellError : Error {
  using Error::Error;
};

struct InvalidBaseVectorError : Error {
  using Error::Error;
};

struct InvalidPolarizationError : Error {
  using Error::Error;
};

struct InconsistentFiberError : Error {
  using Error::Error;
};

struct SamplerDegenerateError : Error {
  using Error::Error;
};

struct IntegrandError : Error {
  using Error::Error;
};

/// Bad scenario configuration (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

/// Construction-time self checks failed (a bug, not a user error).
struct InternalConsistencyError : Error {
  using Error::Error;
};

}  // namespace minext
