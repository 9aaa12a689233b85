#pragma once

#include <stdexcept>
#include <string>

namespace confgeo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point outside the chart's coordinate box.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric failed the positive-definiteness check.
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data violates a documented precondition
/// (zero velocity, constraint violation, malformed frame, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical safeguard tripped during a computation
/// (renormalization drift, degenerate normal field, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace confgeo
