// Error taxonomy for the cwmix library. Every failure surfaced to callers
// derives from cwmix::Error so CLI and test code can catch one base type.
#pragma once

#include <stdexcept>
#include <string>

namespace cwmix {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A covariance (or scale) matrix is not symmetric positive-definite.
/// component_index is -1 when the matrix was checked outside a mixture.
struct NonPositiveDefiniteError : Error {
  NonPositiveDefiniteError(int component, const std::string& what)
      : Error(what), component_index(component) {}
  int component_index;
};

/// Mixture weights do not sum to 1 within the admissible slack.
struct WeightSumError : Error {
  WeightSumError(double actual, const std::string& what)
      : Error(what), actual_sum(actual) {}
  double actual_sum;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct EmptyMixtureError : Error {
  using Error::Error;
};

struct ZeroDirectionError : Error {
  using Error::Error;
};

struct FamilyMismatchError : Error {
  using Error::Error;
};

/// Requested operation is not defined for the component family
/// (e.g. characteristic functions of t mixtures).
struct UnsupportedFamilyError : Error {
  using Error::Error;
};

/// Exact subset enumeration would exceed the enumeration cap.
struct ExactModeTooLargeError : Error {
  using Error::Error;
};

/// Direction-set generation kept failing certification after all retries.
struct GenerationFailedError : Error {
  using Error::Error;
};

/// Integer arithmetic would overflow the result type.
struct OverflowError : Error {
  using Error::Error;
};

/// Numerical integration failed its self-consistency check.
struct QuadratureError : Error {
  using Error::Error;
};

/// Catch-all for argument values that violate a precondition.
struct InvalidArgumentError : Error {
  using Error::Error;
};

}  // namespace cwmix
