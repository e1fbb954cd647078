#pragma once

#include <stdexcept>
#include <string>

namespace zollab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (off-sphere point, non-tangent vector).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Invalid numeric parameter (bad vertex count, unstable time step, bad tolerance).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A value object could not be built (invalid profile, malformed curve).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Curve spacing collapsed below resolvable scale.
class DegenerateCurveError : public Error {
 public:
  using Error::Error;
};

// Non-adjacent segments too close to certify (non-)embeddedness.
class AmbiguousEmbeddingError : public Error {
 public:
  using Error::Error;
};

// The discrete flow lost embeddedness; the mesh is too coarse.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Query point too close to a curve for a reliable component test.
class ProximityError : public Error {
 public:
  using Error::Error;
};

// A loop step is too coarse to follow the lift unambiguously.
class TrackingError : public Error {
 public:
  using Error::Error;
};

}  // namespace zollab
