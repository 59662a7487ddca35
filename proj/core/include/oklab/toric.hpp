#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oklab/kinds.hpp"
#include "oklab/polytope.hpp"

namespace oklab::toric {

// Complete smooth fan in Z^n: primitive ray generators plus the maximal
// cones as n-element ray index sets.
struct ToricVariety {
  int n = 0;
  std::vector<std::vector<long long>> rays;
  std::vector<std::vector<int>> max_cones;

  int num_rays() const { return static_cast<int>(rays.size()); }
};

// Torus-invariant Q-divisor D = sum a_i D_i, one coefficient per ray.
struct DivisorQ {
  std::vector<Rational> coeffs;
};

DivisorQ operator+(const DivisorQ& a, const DivisorQ& b);
DivisorQ operator-(const DivisorQ& a, const DivisorQ& b);
DivisorQ operator*(const Rational& c, const DivisorQ& d);

// Flag of invariant subvarieties Y_i = D_{v_1} cap ... cap D_{v_i}, encoded
// by the rays of a maximal cone in intersection order.
struct InvariantFlag {
  std::vector<int> rays_in_order;
};

struct ToricValidation {
  bool smooth = true;
  bool complete = true;
  bool structural = true;
  std::vector<std::string> problems;
  std::optional<std::vector<long long>> witness_direction;  // uncovered direction
  std::optional<int> witness_cone;                          // non-unimodular cone

  bool ok() const { return smooth && complete && structural && problems.empty(); }
};

ToricValidation validate(const ToricVariety& x);

// Codimension-one wall of the fan together with its relation
// v_left + v_right = sum rel_j * v_{rays[j]}; each wall carries one
// invariant curve.
struct Wall {
  std::vector<int> rays;  // n-1 sorted ray indices
  int left = -1, right = -1;
  std::vector<Rational> rel;
};

std::vector<Wall> walls(const ToricVariety& x);

// Intersection number D . C for the invariant curve of a wall.
Rational wall_degree(const ToricVariety& x, const DivisorQ& d, const Wall& w);

// Section polytope P_D = {u : <u, v_i> >= -a_i for all rays}.
Polytope section_polytope(const ToricVariety& x, const DivisorQ& d);

inline constexpr int kKappaNone = -1;  // encodes kappa = -infinity

int iitaka_dim(const ToricVariety& x, const DivisorQ& d);

struct Classification {
  bool pseudoeffective = false;
  bool big = false;
  bool nef = false;
  bool semiample = false;
};

Classification classify(const ToricVariety& x, const DivisorQ& d);

// Reference ample divisor: sum of the prime invariant divisors when that is
// ample, otherwise an integral ample divisor built by linear programming
// over the nef chamber.  Throws when the fan is not projective.
DivisorQ default_ample(const ToricVariety& x);

// Asymptotic order of vanishing of D along the prime divisor D_i; for big D
// the minimum of a_i + <u, v_i> over P_D, for pseudoeffective non-big D the
// limit over D + eps*A.
Rational asymptotic_order(const ToricVariety& x, const DivisorQ& d, int i,
                          const std::optional<DivisorQ>& ample = {});

struct ZDecomp {
  DivisorQ positive;
  std::vector<std::pair<int, Rational>> negative;  // (ray index, coefficient > 0)
};

struct SigmaS {
  ZDecomp sigma;
  ZDecomp s;
};

// Divisorial Zariski decomposition (via asymptotic orders) and
// s-decomposition (via coefficient minima over P_D).  The two are computed
// independently and must agree coefficientwise on the toric model; a
// mismatch raises RefutationError.
SigmaS sigma_s_decomposition(const ToricVariety& x, const DivisorQ& d,
                             const std::optional<DivisorQ>& ample = {});

using Cone = std::vector<int>;  // sorted ray indices; {} is the zero cone

struct BaseLoci {
  std::vector<Cone> stable;   // cones whose orbit closure lies in SB(D)
  std::vector<Cone> plus;     // augmented locus B+(D)
  std::vector<Cone> minus;    // restricted locus B-(D)
};

BaseLoci base_loci(const ToricVariety& x, const DivisorQ& d,
                   const std::optional<DivisorQ>& ample = {});

// Whether the orbit closure V(cone) lies inside the locus described by
// `loci_cones` (i.e. some recorded cone is a face of `cone`).
bool locus_contains(const std::vector<Cone>& loci_cones, const Cone& cone);

Polytope okounkov_body(const ToricVariety& x, const DivisorQ& d, const InvariantFlag& flag,
                       BodyKind kind, const std::optional<DivisorQ>& ample = {});

// Okounkov body of the restriction to the invariant flag element Y_{n-k}:
// the image of the face of P_D cut out by the first n-k flag rays under the
// flag map.  Lives in {0}^{n-k} x R^k.
Polytope restricted_body(const ToricVariety& x, const DivisorQ& d, const InvariantFlag& flag,
                         int k);

// vol_{X|Y_{n-k}}(D) from the growth of the section counts of the restricted
// linear series, i.e. the lattice point counts of the matching faces of
// P_{mD}.  No base-locus gate; defined directly by the counting definition.
Rational restricted_volume_by_counting(const ToricVariety& x, const DivisorQ& d,
                                       const InvariantFlag& flag, int k);

// Restricted volume of D along the invariant flag element Y_{n-k}, computed
// from the body slice and cross-checked against the counting route; gated on
// Y_{n-k} not sitting inside B+(D).
Rational restricted_volume(const ToricVariety& x, const DivisorQ& d, const InvariantFlag& flag,
                           int k);

int numerical_dim(const ToricVariety& x, const DivisorQ& d);

// Graded linear series generated in degree one by a set of sections of an
// integral divisor, given as lattice points of P_D.
struct GradedSeriesT {
  DivisorQ base;
  std::vector<std::vector<long long>> w1;
};

std::vector<std::vector<long long>> series_generate(const ToricVariety& x,
                                                    const GradedSeriesT& w, int k);
Polytope series_body(const ToricVariety& x, const GradedSeriesT& w, const InvariantFlag& flag);

// Standard fans.
ToricVariety projective_space(int n);
ToricVariety product_p1_p1();
ToricVariety hirzebruch(int a);  // rays (1,0),(0,1),(-1,a),(0,-1)

struct Blowup {
  ToricVariety variety;
  int new_ray = -1;
  Cone center;
};

// Star subdivision at the barycenter of a maximal cone.
Blowup blowup_fixed_point(const ToricVariety& x, const Cone& max_cone);
DivisorQ pullback(const Blowup& bl, const DivisorQ& d);

}  // namespace oklab::toric
