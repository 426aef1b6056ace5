#pragma once

#include <stdexcept>
#include <string>

namespace rrboost {

/// Invalid arguments or flag combinations supplied by the caller.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed, non-finite, or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base of every failure raised by the numerical kernels.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Residuals collapsed to zero (or too many exact zeros) so no positive
/// M-scale exists.
class DegenerateScale : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Bracket expansion for the M-scale equation failed to straddle kappa.
class NoRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Every standardized residual sits in the flat region of rho, so the
/// M-scale gradient is undefined.
class AllOutlying : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rrboost
