#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oklab/kinds.hpp"
#include "oklab/polytope.hpp"
#include "oklab/toric.hpp"

namespace oklab::surface {

struct Curve {
  std::string name;
  QVector cls;
};

// Numerical model of a smooth projective surface: Neron-Severi lattice with
// its intersection form, a curated list of irreducible curve classes, and
// generators of the (polyhedral) effective cone.  The generator list must
// contain every curve of negative self-intersection.
struct LatticeSurface {
  int rank = 0;
  QMatrix form;                             // symmetric, signature (1, rank-1)
  std::vector<Curve> curves;
  std::vector<QVector> effective_generators;
  std::vector<QVector> fibrations;          // primitive fiber classes F, F^2 = 0
  bool abundant = false;
};

using SurfDivisor = QVector;  // class vector of length rank

// Flag (C, x) with C a declared irreducible curve and x a general point of C.
struct SurfFlag {
  std::string curve;
};

Rational pairing(const LatticeSurface& s, const SurfDivisor& a, const SurfDivisor& b);

struct SurfValidation {
  bool ok = true;
  std::vector<std::string> problems;
};

SurfValidation validate(const LatticeSurface& s);

const Curve& curve_by_name(const LatticeSurface& s, const std::string& name);

struct SurfClassification {
  bool pseudoeffective = false;
  bool big = false;
  bool nef = false;
};

SurfClassification classify(const LatticeSurface& s, const SurfDivisor& d);

enum class ZKind { Sigma, S, Good };

struct ZariskiDecomposition {
  SurfDivisor positive;
  std::vector<std::pair<std::string, Rational>> negative;  // coefficients > 0
  ZKind kind = ZKind::Sigma;
  bool positive_semiample = false;  // model fact: nef implies semiample here
};

// Zariski decomposition by support iteration: grow the support from the
// curves D meets negatively, solve the Gram system on it, repeat until no
// curve meets the candidate positive part negatively.  kind = S instead
// computes each coefficient as the minimum over effective cone
// representations; kind = Good is the sigma decomposition plus the
// abundance bookkeeping, and demands that the two routes coincide.
ZariskiDecomposition zariski_decompose(const LatticeSurface& s, const SurfDivisor& d,
                                       ZKind kind = ZKind::Sigma);

int numerical_dim(const LatticeSurface& s, const SurfDivisor& d);  // -1 is -infinity

// Iitaka dimension under the abundance input flag; refuses non-big divisors
// on non-abundant models.
int kappa(const LatticeSurface& s, const SurfDivisor& d);

// Largest t with D - tC pseudoeffective.
Rational mu(const LatticeSurface& s, const SurfDivisor& d, const std::string& curve);

struct SweepChamber {
  Rational t_lo, t_hi;
  std::vector<std::string> support;
  // Negative part coefficients as affine functions c0 + t*c1, aligned with
  // `support`.
  std::vector<std::pair<Rational, Rational>> coeff_affine;
  Rational beta0, beta1;  // beta(t) = P_t . C
};

struct Sweep {
  Rational a;         // coefficient of C in N_sigma(D); left edge of the body
  Rational mu_value;  // right edge
  std::vector<SweepChamber> chambers;
};

// Exact chamber structure of t -> N_sigma(D - tC) on [a, mu].
Sweep parametric_sweep(const LatticeSurface& s, const SurfDivisor& d, const std::string& curve);

Polytope okounkov_polygon(const LatticeSurface& s, const SurfDivisor& d, const SurfFlag& flag,
                          BodyKind kind);

struct RestrictedVolumes {
  Rational vol;
  Rational vol_plus;
};

RestrictedVolumes restricted_volumes(const LatticeSurface& s, const SurfDivisor& d,
                                     const std::string& curve,
                                     const std::optional<SurfDivisor>& ample = {});

struct DivisorialLoci {
  std::vector<std::string> minus;  // divisorial part of B-
  std::vector<std::string> plus;   // divisorial part of B+ (big divisors only)
};

DivisorialLoci base_loci_divisorial(const LatticeSurface& s, const SurfDivisor& d);

// Rational ample class constructed by linear programming over the dual of
// the effective cone; deterministic.
SurfDivisor default_ample(const LatticeSurface& s);
// A second, non-proportional ample class (used by independence checks).
SurfDivisor second_ample(const LatticeSurface& s);

// Numerical model of a smooth complete toric surface, with the invariant
// curve classes as curves and effective generators.
struct ToricSurfaceModel {
  LatticeSurface surface;
  std::vector<QVector> ray_classes;        // class of D_i per ray
  std::vector<std::string> ray_curve_names;
};

ToricSurfaceModel from_toric(const toric::ToricVariety& x);

// Class vector of a toric divisor in the model of from_toric.
SurfDivisor class_of(const ToricSurfaceModel& m, const toric::DivisorQ& d);

}  // namespace oklab::surface
