#pragma once

#include <string>

#include "oklab/polytope.hpp"

namespace oklab::svg {

// Deterministic SVG rendering of a polytope in the plane.  The viewBox is
// computed from the vertices, every coordinate is emitted through exact
// fixed-point arithmetic (no floating point), and vertices carry their exact
// rational labels.  Degenerate bodies render as a segment or a labeled dot.
// Throws unless ambient_dim == 2 (the polytope may have any affine_dim).
std::string render(const Polytope& p);

}  // namespace oklab::svg
