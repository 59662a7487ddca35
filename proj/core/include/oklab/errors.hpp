#pragma once

#include <stdexcept>
#include <string>

namespace oklab {

// Base class for all errors raised by the geometry kernel.
struct GeomError : std::runtime_error {
  explicit GeomError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : GeomError {
  explicit DimensionMismatch(const std::string& what) : GeomError(what) {}
};

// The feasible region of a halfspace system is unbounded; such sets are not
// representable as a Polytope.
struct UnboundedError : GeomError {
  explicit UnboundedError(const std::string& what) : GeomError(what) {}
};

struct InfeasibleError : GeomError {
  explicit InfeasibleError(const std::string& what) : GeomError(what) {}
};

// A stated precondition of an operation does not hold for the given input
// (e.g. a divisor is not pseudoeffective, a flag element sits inside an
// augmented base locus).  Maps to CLI exit code 3.
struct HypothesisError : std::runtime_error {
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

// Two independent computations of the same quantity disagree.  This never
// indicates bad input; it means a closed form was refuted.  Maps to CLI
// exit code 4.
struct RefutationError : std::runtime_error {
  explicit RefutationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or option set.  Maps to CLI exit code 2.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oklab
