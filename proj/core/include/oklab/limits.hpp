#pragma once

#include <functional>

#include "oklab/polytope.hpp"

namespace oklab {

// One-sided limits at 0+ of functions of a rational parameter that are known
// to be eventually affine (scalars, vertex paths) or eventually constant
// (finite sets).  Evaluation points are eps = 1/2, 1/4, 1/8, ...; a fit is
// accepted once it reproduces two further evaluation points, then
// extrapolated to eps = 0 exactly.

Rational limit_at_zero(const std::function<Rational(const Rational&)>& f, int max_steps = 48);

// Same idea for functions that are eventually polynomial in eps of bounded
// degree (volumes of parametric bodies): fit degree+1 samples, verify two.
Rational limit_at_zero_poly(const std::function<Rational(const Rational&)>& f, int degree,
                            int max_steps = 48);

// Vertexwise limit of a polytope path.  Vertices are matched in
// lexicographic order once the combinatorics stabilize; coincident limits
// collapse through a final hull.
Polytope limit_polytope_at_zero(const std::function<Polytope(const Rational&)>& f,
                                int max_steps = 48);

// Value of an eventually-constant map at 0+: three consecutive equal
// evaluations are required.
template <class T, class Eq>
T stable_at_zero(const std::function<T(const Rational&)>& f, Eq equal, int max_steps = 48) {
  Rational eps(1, 2);
  T a = f(eps);
  eps /= Rational(2);
  T b = f(eps);
  for (int step = 0; step < max_steps; ++step) {
    eps /= Rational(2);
    T c = f(eps);
    if (equal(a, b) && equal(b, c)) return c;
    a = std::move(b);
    b = std::move(c);
  }
  throw GeomError("stable_at_zero: no stabilization");
}

}  // namespace oklab
