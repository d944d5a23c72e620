#pragma once

#include <stdexcept>

namespace sirg {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A kernel evaluated to a negative or non-finite connection weight.
class KernelInvalid : public Error {
 public:
  using Error::Error;
};

// Root finding failed: no sign change in the bracket or tolerance unreachable.
class NoRoot : public Error {
 public:
  using Error::Error;
};

// An operation that needs at least one vertex received an empty graph.
class EmptyGraph : public Error {
 public:
  using Error::Error;
};

// An argument left the mathematical domain of the operation (log of a
// non-positive number, probabilities outside [0,1], and the like).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two routes that must agree to high precision disagreed.  Always a bug.
class IdentityViolation : public Error {
 public:
  using Error::Error;
};

// Serialized data did not have the expected shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration requested beyond its size cap.
class SizeLimit : public Error {
 public:
  using Error::Error;
};

// A Monte Carlo estimate came back empty (no hits, nothing to take a log of).
class EstimateDegenerate : public Error {
 public:
  using Error::Error;
};

// The field constraint could not be re-solved at a displaced parameter.
class ConstraintLost : public Error {
 public:
  using Error::Error;
};

// No criticality threshold exists in the scanned range.
class NoCriticalPoint : public Error {
 public:
  using Error::Error;
};

// Bad user-facing configuration: unparsable kernel spec, invalid grid, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sirg
