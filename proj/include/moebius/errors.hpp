#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace moebius {

// Base class for everything this library throws on purpose. The CLI maps
// ConfigError to exit code 2 and all other Error subclasses to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed requests: unknown family or block names, bad dimensions,
// unknown config keys, invalid flag values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Chart point outside the declared domain, or a map applied to a point
// that violates its preconditions (e.g. tau on a non-hyperboloid point).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Finite-difference step underflow and similar floating-point breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A computation needed more Taylor coefficients than the jet carries.
class JetOrderError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient Jacobian: the chart map fails to immerse at a point.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// |h|^2 - m|H|^2 vanished at a sample; conformal invariants are undefined
// there. Carries the offending chart point.
class UmbilicError : public Error {
 public:
  UmbilicError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

// Parameter triples violating their constraints (radius relation, negative
// squared coefficients, mean-weighted sums).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Cross-check failed in a place that indicates a bug rather than bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// The weight system has no solution because the shared quadratic term
// vanished.
class IndeterminateMuError : public Error {
 public:
  using Error::Error;
};

// Block scalar curvatures produce weights that do not sum to one.
class IncompatibleBlocksError : public Error {
 public:
  using Error::Error;
};

// Weights fall outside [0, 1].
class InfeasibleBlocksError : public Error {
 public:
  using Error::Error;
};

// Non-symmetric matrix handed to the symmetric eigensolver.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

// A vector that should sit on the forward light cone does not.
class ConeViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace moebius
