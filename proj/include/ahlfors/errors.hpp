#pragma once

#include <stdexcept>
#include <string>

namespace ahlfors {

// Common base so callers (and the CLI) can catch every library error in one place.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid construction: dimension not in {2,3}, odd axis, axis too small, wrong axis count.
struct BadShape : Error {
  using Error::Error;
};

// Metric fails the pointwise symmetric-positive-definite test.
struct NonSPDMetric : Error {
  using Error::Error;
};

// Two fields (or a field and a manifold) live on different grids.
struct ShapeMismatch : Error {
  using Error::Error;
};

// A file-loaded field has the wrong tensor rank for its slot.
struct RankMismatch : Error {
  using Error::Error;
};

// Adjoint Ahlfors operator asked to certify trace-freeness and the input is not trace-free.
struct NotTraceFree : Error {
  using Error::Error;
};

// Right-hand side has a component along the operator kernel; the system is unsolvable.
struct Inconsistent : Error {
  using Error::Error;
};

// Operation only defined on a flat metric.
struct NotFlat : Error {
  using Error::Error;
};

// Tensor supplied as transverse-traceless fails the trace-free/divergence-free check.
struct NotTT : Error {
  using Error::Error;
};

// Input violates a theorem's hypotheses (e.g. momentum constraint not satisfied).
struct Inapplicable : Error {
  using Error::Error;
};

// Field file does not start with the format magic.
struct BadMagic : Error {
  using Error::Error;
};

// Field file payload shorter than the header promises.
struct TruncatedPayload : Error {
  using Error::Error;
};

}  // namespace ahlfors
