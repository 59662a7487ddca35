#pragma once

#include <vector>

#include "oklab/lp.hpp"
#include "oklab/vec.hpp"

namespace oklab {

// Closed halfspace {u : <normal, u> >= offset}.
struct Halfspace {
  QVector normal;
  Rational offset;

  Halfspace(QVector n, Rational o) : normal(std::move(n)), offset(std::move(o)) {}
};

bool operator==(const Halfspace& a, const Halfspace& b);

// Bounded rational polytope carrying both representations.  Every publicly
// constructed Polytope is complete: the vertex list is minimal (each point
// extreme), the inequality list consists of the facets of the polytope inside
// its affine hull, and the affine hull itself is stored as equalities.
// Lower-dimensional and empty polytopes are first-class.  Unbounded halfspace
// systems are rejected with UnboundedError at construction.  Values are
// immutable after construction.
class Polytope {
 public:
  static Polytope empty(int ambient_dim);
  static Polytope hull(int ambient_dim, const std::vector<QVector>& points);
  static Polytope from_halfspaces(int ambient_dim, const std::vector<Halfspace>& halfspaces);

  int ambient_dim() const { return ambient_dim_; }
  int affine_dim() const { return affine_dim_; }  // -1 for the empty polytope
  bool is_empty() const { return affine_dim_ < 0; }

  const std::vector<QVector>& vertices() const { return vertices_; }
  // Irredundant facet inequalities (relative to the affine hull).
  const std::vector<Halfspace>& facets() const { return facets_; }
  // Affine-hull equations <normal, u> = offset.
  const std::vector<Halfspace>& equalities() const { return equalities_; }
  // External H-representation: facets plus each equality expanded to an
  // opposite pair of halfspaces.
  std::vector<Halfspace> halfspaces() const;

  bool contains_point(const QVector& p) const;

 private:
  Polytope() = default;

  int ambient_dim_ = 0;
  int affine_dim_ = -1;
  std::vector<QVector> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<Halfspace> equalities_;

  friend Polytope make_polytope_unchecked(int, int, std::vector<QVector>,
                                          std::vector<Halfspace>, std::vector<Halfspace>);
};

// Recomputes the vertex representation from the halfspace representation
// (a full double-description round trip); the result describes the same set.
Polytope convert(const Polytope& p);

// Exact Lebesgue volume of p inside the coordinate subspace indexed by
// `coords`.  Requires all other coordinates of p to vanish identically
// ("coordinate-flat"); returns 0 when affine_dim < |coords|.
Rational volume(const Polytope& p, const std::vector<int>& coords);

// Convenience: volume in all ambient coordinates.
Rational volume_full(const Polytope& p);

// All integer points of p, in lexicographic order.
std::vector<std::vector<long long>> lattice_points(const Polytope& p);

struct PolytopeOpt {
  Rational value;
  QVector witness;  // lexicographically smallest optimal vertex
};

// Exact linear optimization over p via the simplex method on the
// H-representation.  Throws InfeasibleError when p is empty.
PolytopeOpt lp_optimize(const QVector& objective, const Polytope& p, LpSense sense);

// Intersection with {u : u_1 = ... = u_{n-k} = 0}, in ambient coordinates.
Polytope slice(const Polytope& p, int k);

Polytope affine_image(const Polytope& p, const QMatrix& m, const QVector& t);
Polytope minkowski_sum(const Polytope& p, const Polytope& q);
Polytope intersect(const Polytope& p, const Polytope& q);
Polytope scale(const Polytope& p, const Rational& factor);
Polytope translate(const Polytope& p, const QVector& t);
// Image under the projection that keeps the listed coordinates.
Polytope project_coords(const Polytope& p, const std::vector<int>& coords);

bool contains(const Polytope& outer, const Polytope& inner);
bool equals(const Polytope& p, const Polytope& q);  // set equality

// vol(inner)/vol(outer) measured in the affine hull of outer; requires
// inner to be contained in that hull.  Exact; 1 when outer is a single point
// and inner equals it.
Rational relative_volume_ratio(const Polytope& inner, const Polytope& outer);

}  // namespace oklab
