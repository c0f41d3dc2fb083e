#pragma once

#include <stdexcept>
#include <string>

namespace grw {

/// Root of the engine's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluation left the domain of a function (log/sqrt of non-positive,
/// interval or chart exit, FD stencil outside the domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Division by a jet whose value vanishes.
class SingularJet : public Error {
 public:
  using Error::Error;
};

/// Fiber or ambient metric is not non-degenerate with the expected signature.
class MetricDegeneracy : public Error {
 public:
  using Error::Error;
};

/// A graph point violates the spacelike margin.
class DegenerateHypersurface : public Error {
 public:
  using Error::Error;
};

/// Two independent computations that must agree did not.
class ConsistencyFault : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace grw
