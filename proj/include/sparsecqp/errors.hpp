#pragma once

#include <stdexcept>
#include <string>

namespace sparsecqp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value falls outside the quantizer codebook range.
class SaturationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid dimensions (k > n, mismatched vector lengths...).
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar parameter (negative bound, alpha > beta, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Problem too large for an exhaustive enumeration routine.
class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

/// The simplex engine could not find a usable pivot.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Least-squares refit on a support with linearly dependent columns.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Malformed input document (missing field, wrong shape...).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsecqp
